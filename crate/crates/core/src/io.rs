//! JSON files for every persisted value. Numbers that carry exact meaning are
//! `"p/q"` strings; parse errors name the offending path in the document.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localize::{
    homotopy_localize, HomotopyFamily, LocalizationParams, LocalizedHomotopy, LocalizedMap, MollifierScheme,
};
use crate::map::{CoverageTerm, Feature, LocalTable, MapPipeline, Stage, Wiggle};
use crate::patch::Patch;
use crate::rational::{Rational, Vector};
use crate::section::{Section, SectionFile};
use crate::system::{catalog, Label, SubstitutionSystem, SystemFile};

pub const SCHEMA_VERSION: u32 = 1;

fn current_version() -> u32 {
    SCHEMA_VERSION
}

fn check_version(v: u32, path: &str) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(Error::parse(path, format!("unknown schema version {v}")));
    }
    Ok(())
}

/// Parses `text`, reporting failures at their path inside the document.
pub fn from_json_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::parse(
            if path == "." { "(root)".into() } else { path },
            e.into_inner().to_string(),
        )
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    from_json_str(&text).map_err(|e| match e {
        Error::Parse { path: p, msg } => Error::parse(format!("{}: {p}", path.display()), msg),
        other => other,
    })
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes via a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_atomic(path, &to_json_string(value)?)
}

/// Known spaces by name: the bundled catalog plus any loaded from files.
#[derive(Clone)]
pub struct Spaces {
    by_name: BTreeMap<String, Arc<SubstitutionSystem>>,
}

impl Default for Spaces {
    fn default() -> Self {
        Spaces {
            by_name: catalog().into_iter().map(|s| (s.name.clone(), Arc::new(s))).collect(),
        }
    }
}

impl Spaces {
    pub fn add(&mut self, sys: SubstitutionSystem) -> Arc<SubstitutionSystem> {
        let sys = Arc::new(sys);
        self.by_name.insert(sys.name.clone(), sys.clone());
        sys
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.by_name.keys().map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Result<Arc<SubstitutionSystem>> {
        let name = if name == "pd" { "period-doubling" } else { name };
        self.by_name
            .get(name)
            .cloned()
            .ok_or_else(|| Error::parse("space", format!("unknown space '{name}'")))
    }

    /// A space name, or the path of a substitution file (which is then registered).
    pub fn resolve(&mut self, arg: &str) -> Result<Arc<SubstitutionSystem>> {
        if let Ok(sys) = self.get(arg) {
            return Ok(sys);
        }
        let path = Path::new(arg);
        if !path.exists() {
            return Err(Error::parse(
                "space",
                format!("'{arg}' is neither a known space nor a file"),
            ));
        }
        let file: SystemFile = read_json(path)?;
        Ok(self.add(SubstitutionSystem::from_file(&file)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineFile {
    #[serde(default = "current_version")]
    pub version: u32,
    pub source: String,
    pub target: String,
    pub stages: Vec<StageFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StageFile {
    Translate(TranslateStage),
    LocalTable(TableStage),
    Substitute(SubstituteStage),
    Wiggle(WiggleStage),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslateStage {
    pub v: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableStage {
    pub radius: Rational,
    /// Output space; defaults to the pipeline target.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub table: Vec<TableRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubstituteStage {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WiggleStage {
    #[serde(rename = "K")]
    pub k: usize,
    pub coeffs: Vec<Rational>,
    pub features: Vec<Vec<TermFile>>,
    pub decay: DecayFile,
}

const STAGE_KINDS: &[&str] = &["translate", "local_table", "substitute", "wiggle"];

// A hand-written tagged read: with "kind" first, the rest of the object is
// read in place, so error paths reach into the stage body.
impl<'de> Deserialize<'de> for StageFile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> serde::de::Visitor<'de> for V {
            type Value = StageFile;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a stage object whose first key is \"kind\"")
            }

            fn visit_map<A: serde::de::MapAccess<'de>>(self, mut map: A) -> std::result::Result<StageFile, A::Error> {
                use serde::de::value::MapAccessDeserializer;
                use serde::de::Error as _;
                match map.next_key::<String>()?.as_deref() {
                    Some("kind") => {}
                    _ => return Err(A::Error::custom("\"kind\" must be the first key of a stage")),
                }
                let kind: String = map.next_value()?;
                let rest = MapAccessDeserializer::new(map);
                Ok(match kind.as_str() {
                    "translate" => StageFile::Translate(Deserialize::deserialize(rest)?),
                    "local_table" => StageFile::LocalTable(Deserialize::deserialize(rest)?),
                    "substitute" => StageFile::Substitute(Deserialize::deserialize(rest)?),
                    "wiggle" => StageFile::Wiggle(Deserialize::deserialize(rest)?),
                    other => return Err(A::Error::unknown_variant(other, STAGE_KINDS)),
                })
            }
        }
        d.deserialize_map(V)
    }
}

/// Labels at the window offsets (origin first), and the output label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRow {
    pub window: Vec<String>,
    pub out: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub center: Vector,
    pub label: String,
    pub direction: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayFile {
    #[serde(rename = "C")]
    pub c: Rational,
    pub lambda: Rational,
}

fn label_of(sys: &SubstitutionSystem, name: &str, path: &str) -> Result<Label> {
    sys.label_index(name)
        .ok_or_else(|| Error::parse(path, format!("unknown label '{name}' in space '{}'", sys.name)))
}

fn vector_of_dim(v: &Vector, dim: usize, path: &str) -> Result<()> {
    if v.dim() != dim {
        return Err(Error::parse(
            path,
            format!("expected {dim} coordinates, got {}", v.dim()),
        ));
    }
    Ok(())
}

pub fn pipeline_to_file(f: &MapPipeline) -> PipelineFile {
    let mut current = f.source.clone();
    let stages = f
        .stages
        .iter()
        .map(|stage| match stage {
            Stage::Translate { v } => StageFile::Translate(TranslateStage { v: v.clone() }),
            Stage::Substitute => StageFile::Substitute(SubstituteStage {}),
            Stage::LocalTable(lt) => {
                let mut table: Vec<TableRow> = lt
                    .table
                    .iter()
                    .map(|(w, &o)| TableRow {
                        window: w.iter().map(|&l| current.label_name(l).to_string()).collect(),
                        out: lt.output.label_name(o).to_string(),
                    })
                    .collect();
                table.sort_by(|a, b| a.window.cmp(&b.window));
                let output = (lt.output.name != f.target.name).then(|| lt.output.name.clone());
                current = lt.output.clone();
                StageFile::LocalTable(TableStage {
                    radius: lt.radius.clone(),
                    output,
                    table,
                })
            }
            Stage::Wiggle(w) => StageFile::Wiggle(WiggleStage {
                k: w.depth(),
                coeffs: w.coeffs.clone(),
                features: w
                    .features
                    .iter()
                    .map(|feat| {
                        feat.terms
                            .iter()
                            .map(|t| TermFile {
                                center: t.center.clone(),
                                label: current.label_name(t.label).to_string(),
                                direction: t.direction.clone(),
                            })
                            .collect()
                    })
                    .collect(),
                decay: DecayFile {
                    c: w.decay.0.clone(),
                    lambda: w.decay.1.clone(),
                },
            }),
        })
        .collect();
    PipelineFile {
        version: SCHEMA_VERSION,
        source: f.source.name.clone(),
        target: f.target.name.clone(),
        stages,
    }
}

pub fn pipeline_from_file(file: &PipelineFile, spaces: &Spaces) -> Result<MapPipeline> {
    check_version(file.version, "version")?;
    let source = spaces
        .get(&file.source)
        .map_err(|_| Error::parse("source", format!("unknown space '{}'", file.source)))?;
    let target = spaces
        .get(&file.target)
        .map_err(|_| Error::parse("target", format!("unknown space '{}'", file.target)))?;
    let mut f = MapPipeline::identity(source.clone());
    let mut current = source;
    for (i, stage) in file.stages.iter().enumerate() {
        let at = |field: &str| format!("stages[{i}].{field}");
        let parsed = match stage {
            StageFile::Translate(TranslateStage { v }) => {
                vector_of_dim(v, current.dim, &at("v"))?;
                Stage::Translate { v: v.clone() }
            }
            StageFile::Substitute(_) => Stage::Substitute,
            StageFile::LocalTable(TableStage { radius, output, table }) => {
                if radius.is_negative() {
                    return Err(Error::parse(at("radius"), "table radius must be non-negative"));
                }
                let out = match output {
                    Some(name) => spaces
                        .get(name)
                        .map_err(|e| Error::parse(at("output"), e.to_string()))?,
                    None => target.clone(),
                };
                let offsets = LocalTable::window_offsets(current.dim, radius);
                let mut map = HashMap::with_capacity(table.len());
                for (j, row) in table.iter().enumerate() {
                    let path = at(&format!("table[{j}]"));
                    if row.window.len() != offsets.len() {
                        return Err(Error::parse(
                            format!("{path}.window"),
                            format!("window needs {} labels, got {}", offsets.len(), row.window.len()),
                        ));
                    }
                    let window = row
                        .window
                        .iter()
                        .map(|n| label_of(&current, n, &format!("{path}.window")))
                        .collect::<Result<Vec<_>>>()?;
                    let label = label_of(&out, &row.out, &format!("{path}.out"))?;
                    if map.insert(window, label).is_some() {
                        return Err(Error::parse(path, "duplicate window"));
                    }
                }
                current = out.clone();
                Stage::LocalTable(LocalTable {
                    radius: radius.clone(),
                    output: out,
                    offsets: Arc::new(offsets),
                    table: Arc::new(map),
                })
            }
            StageFile::Wiggle(WiggleStage {
                k,
                coeffs,
                features,
                decay,
            }) => {
                if coeffs.len() != *k || features.len() != *k {
                    return Err(Error::parse(
                        at("K"),
                        format!(
                            "K = {k} but {} coefficients and {} features",
                            coeffs.len(),
                            features.len()
                        ),
                    ));
                }
                let mut feats = Vec::with_capacity(*k);
                for (j, terms) in features.iter().enumerate() {
                    let mut out = Vec::with_capacity(terms.len());
                    for (m, t) in terms.iter().enumerate() {
                        let path = at(&format!("features[{j}][{m}]"));
                        vector_of_dim(&t.center, current.dim, &format!("{path}.center"))?;
                        vector_of_dim(&t.direction, current.dim, &format!("{path}.direction"))?;
                        out.push(CoverageTerm {
                            center: t.center.clone(),
                            label: label_of(&current, &t.label, &format!("{path}.label"))?,
                            direction: t.direction.clone(),
                        });
                    }
                    feats.push(Feature { terms: out });
                }
                let w = Wiggle {
                    coeffs: coeffs.clone(),
                    features: feats,
                    decay: (decay.c.clone(), decay.lambda.clone()),
                };
                w.check(&current)
                    .map_err(|e| Error::parse(format!("stages[{i}]"), e.to_string()))?;
                Stage::Wiggle(w)
            }
        };
        f = f.then(parsed);
    }
    if f.target.name != target.name {
        return Err(Error::parse(
            "target",
            format!("stages end in '{}', not '{}'", f.target.name, target.name),
        ));
    }
    f.target = target;
    f.check()?;
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    pub nodes: Vec<Vector>,
    pub weights: Vec<Rational>,
}

impl From<&MollifierScheme> for SchemeFile {
    fn from(s: &MollifierScheme) -> Self {
        SchemeFile {
            nodes: s.nodes.clone(),
            weights: s.weights.clone(),
        }
    }
}

/// Where the section comes from: a strict exported table, or lazy search when `file` is absent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionRef {
    pub space: String,
    pub radius: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalizedFile {
    #[serde(default = "current_version")]
    pub version: u32,
    pub base_map: PipelineFile,
    pub section_ref: SectionRef,
    pub epsilon: Rational,
    pub delta: Rational,
    #[serde(rename = "R")]
    pub radius: Rational,
    pub lipschitz: Rational,
    #[serde(default = "Rational::one")]
    pub node_scale: Rational,
    /// `"C<order>"` when averaged over the space's rotation group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub scheme: SchemeFile,
}

pub fn localized_to_file(fe: &LocalizedMap, section_file: Option<String>) -> LocalizedFile {
    LocalizedFile {
        version: SCHEMA_VERSION,
        base_map: pipeline_to_file(&fe.base),
        section_ref: SectionRef {
            space: fe.section.system().name.clone(),
            radius: fe.section.radius().clone(),
            file: section_file,
        },
        epsilon: fe.params.epsilon.clone(),
        delta: fe.params.delta.clone(),
        radius: fe.params.radius.clone(),
        lipschitz: fe.params.lipschitz.clone(),
        node_scale: fe.node_scale.clone(),
        group: fe.group.as_ref().map(|g| format!("C{}", g.order)),
        scheme: SchemeFile::from(&*fe.scheme),
    }
}

/// Re-derives the tolerances and re-checks the stored certificate against the base map.
fn params_from(
    f: &MapPipeline,
    epsilon: &Rational,
    delta: &Rational,
    radius: &Rational,
    lipschitz: &Rational,
) -> Result<LocalizationParams> {
    if !epsilon.is_positive() || *epsilon >= crate::rational::q(1, 2) {
        return Err(Error::parse("epsilon", format!("ε = {epsilon} must lie in (0, 1/2)")));
    }
    if !delta.is_positive() {
        return Err(Error::parse("delta", "δ must be positive"));
    }
    let two = Rational::from_int(2);
    let eps_ball = epsilon / &two;
    let eps_move = epsilon / Rational::from_int(4);
    let cert = f.modulus(&eps_ball, &eps_move)?;
    if *delta > cert.delta {
        return Err(Error::parse(
            "delta",
            format!("δ = {delta} exceeds the certified modulus {}", cert.delta),
        ));
    }
    if *lipschitz < cert.lipschitz {
        return Err(Error::parse(
            "lipschitz",
            format!("below the map's constant {}", cert.lipschitz),
        ));
    }
    if *radius != &two / delta {
        return Err(Error::parse("R", format!("R must equal 2/δ = {}", &two / delta)));
    }
    let params = LocalizationParams {
        epsilon: epsilon.clone(),
        eps_ball,
        eps_move,
        delta: delta.clone(),
        radius: radius.clone(),
        lipschitz: lipschitz.clone(),
    };
    if params.rho_bound() > *epsilon || params.s_bound() >= *epsilon {
        return Err(Error::parse("delta", "translation budget L·δ + 2ε_move exceeds ε"));
    }
    Ok(params)
}

fn load_section(r: &SectionRef, sys: &Arc<SubstitutionSystem>, base_dir: &Path) -> Result<Section> {
    if r.space != sys.name {
        return Err(Error::parse(
            "section_ref.space",
            format!("base map reads '{}'", sys.name),
        ));
    }
    match &r.file {
        None => Section::lazy(sys.clone(), r.radius.clone()),
        Some(name) => {
            let file: SectionFile = read_json(&base_dir.join(name))?;
            if file.radius != r.radius || file.space != sys.name {
                return Err(Error::parse(
                    "section_ref.file",
                    "section file does not match the reference",
                ));
            }
            Section::import(sys.clone(), &file)
        }
    }
}

/// `base_dir` resolves a relative section file.
pub fn localized_from_file(file: &LocalizedFile, spaces: &Spaces, base_dir: &Path) -> Result<LocalizedMap> {
    check_version(file.version, "version")?;
    let base = pipeline_from_file(&file.base_map, spaces).map_err(|e| nest("base_map", e))?;
    let params = params_from(&base, &file.epsilon, &file.delta, &file.radius, &file.lipschitz)?;
    if file.section_ref.radius != params.radius {
        return Err(Error::parse("section_ref.radius", "section radius differs from R"));
    }
    let section = load_section(&file.section_ref, &base.source, base_dir)?;
    let scheme = MollifierScheme::new(file.scheme.nodes.clone(), file.scheme.weights.clone())
        .map_err(|e| Error::parse("scheme", e.to_string()))?;
    if scheme.nodes.iter().any(|u| u.dim() != base.source.dim) {
        return Err(Error::parse("scheme.nodes", "node dimension differs from the space"));
    }
    if file.node_scale.is_negative() || file.node_scale > Rational::one() {
        return Err(Error::parse("node_scale", "must lie in [0, 1]"));
    }
    let group = match &file.group {
        None => None,
        Some(name) => {
            let g = base
                .source
                .group
                .clone()
                .filter(|g| format!("C{}", g.order) == *name)
                .ok_or_else(|| Error::parse("group", format!("space has no group {name}")))?;
            if !scheme.is_group_invariant(&g) {
                return Err(Error::parse("scheme", "scheme is not invariant under the group"));
            }
            Some(g)
        }
    };
    let mut fe = LocalizedMap::new(Arc::new(base), Arc::new(section), Arc::new(scheme), params)?;
    fe.node_scale = file.node_scale.clone();
    fe.group = group;
    Ok(fe)
}

fn nest(prefix: &str, e: Error) -> Error {
    match e {
        Error::Parse { path, msg } => Error::parse(format!("{prefix}.{path}"), msg),
        other => other,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    #[serde(default = "current_version")]
    pub version: u32,
    pub breakpoints: Vec<Rational>,
    pub pipelines: Vec<PipelineFile>,
}

pub fn family_to_file(f: &HomotopyFamily) -> FamilyFile {
    FamilyFile {
        version: SCHEMA_VERSION,
        breakpoints: f.breakpoints.clone(),
        pipelines: f.pipelines.iter().map(pipeline_to_file).collect(),
    }
}

pub fn family_from_file(file: &FamilyFile, spaces: &Spaces) -> Result<HomotopyFamily> {
    check_version(file.version, "version")?;
    let pipelines = file
        .pipelines
        .iter()
        .enumerate()
        .map(|(i, p)| pipeline_from_file(p, spaces).map_err(|e| nest(&format!("pipelines[{i}]"), e)))
        .collect::<Result<Vec<_>>>()?;
    let family = HomotopyFamily {
        breakpoints: file.breakpoints.clone(),
        pipelines,
    };
    family.check().map_err(|e| Error::parse("breakpoints", e.to_string()))?;
    Ok(family)
}

/// A localized homotopy is stored as its family and tolerances; loading rebuilds it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomotopyFile {
    #[serde(default = "current_version")]
    pub version: u32,
    pub family: FamilyFile,
    pub epsilon: Rational,
    pub delta: Rational,
    #[serde(rename = "R")]
    pub radius: Rational,
    pub grid: usize,
    pub scheme: SchemeFile,
}

pub fn homotopy_to_file(h: &LocalizedHomotopy) -> HomotopyFile {
    HomotopyFile {
        version: SCHEMA_VERSION,
        family: family_to_file(&h.family),
        epsilon: h.params.epsilon.clone(),
        delta: h.params.delta.clone(),
        radius: h.params.radius.clone(),
        grid: h.slices.len(),
        scheme: SchemeFile::from(&*h.scheme),
    }
}

pub fn homotopy_from_file(file: &HomotopyFile, spaces: &Spaces) -> Result<LocalizedHomotopy> {
    check_version(file.version, "version")?;
    let family = family_from_file(&file.family, spaces).map_err(|e| nest("family", e))?;
    let h = homotopy_localize(family, &file.epsilon, file.grid)?;
    if h.params.delta != file.delta {
        return Err(Error::parse(
            "delta",
            format!("rebuilt family has δ = {}", h.params.delta),
        ));
    }
    if h.params.radius != file.radius {
        return Err(Error::parse("R", format!("rebuilt family has R = {}", h.params.radius)));
    }
    if SchemeFile::from(&*h.scheme) != file.scheme {
        return Err(Error::parse(
            "scheme",
            "only the standard scheme is supported for families",
        ));
    }
    Ok(h)
}

/// Text rendering of a patch: one character per cell, rows from top to bottom.
pub fn render_patch(patch: &Patch, sys: &SubstitutionSystem) -> String {
    let Some((lo, hi)) = patch.tiles.keys().fold(None, |acc: Option<([i64; 2], [i64; 2])>, c| {
        Some(match acc {
            None => (*c, *c),
            Some((l, h)) => ([l[0].min(c[0]), l[1].min(c[1])], [h[0].max(c[0]), h[1].max(c[1])]),
        })
    }) else {
        return String::from("(empty patch)\n");
    };
    let glyph = |l: Label| sys.label_name(l).chars().next().unwrap_or('?');
    let mut out = format!(
        "shift {:?}, cells x {}..={}, y {}..={}\n",
        patch.shift, lo[0], hi[0], lo[1], hi[1]
    );
    for y in (lo[1]..=hi[1]).rev() {
        let row: String = (lo[0]..=hi[0])
            .map(|x| patch.tiles.get(&[x, y]).map_or('.', |&l| glyph(l)))
            .collect();
        out.push_str(&row);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localize::localize;
    use crate::rational::q;
    use crate::system::period_doubling;

    fn wiggle() -> MapPipeline {
        MapPipeline::single(
            Arc::new(period_doubling()),
            Stage::Wiggle(Wiggle::geometric_1d(10, q(1, 4), 0)),
        )
    }

    #[test]
    fn zero_denominator_names_its_path() {
        let mut file = pipeline_to_file(&wiggle());
        file.stages.insert(
            0,
            StageFile::Translate(TranslateStage {
                v: Vector(vec![q(1, 4)]),
            }),
        );
        let text = to_json_string(&file).unwrap().replacen("\"1/4\"", "\"1/0\"", 1);
        match from_json_str::<PipelineFile>(&text) {
            Err(Error::Parse { path, msg }) => {
                assert_eq!(path, "stages[0].v[0]");
                assert!(msg.contains("denominator"), "{msg}");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_and_versions_are_rejected() {
        let text =
            r#"{"source":"period-doubling","target":"period-doubling","stages":[{"kind":"substitute","extra":1}]}"#;
        assert!(matches!(from_json_str::<PipelineFile>(text), Err(Error::Parse { .. })));
        let mut file = pipeline_to_file(&wiggle());
        file.version = 7;
        let err = pipeline_from_file(&file, &Spaces::default()).unwrap_err();
        assert!(err.to_string().contains("schema version"));
    }

    #[test]
    fn localized_map_round_trips() {
        let fe = localize(wiggle(), &q(1, 8)).unwrap();
        let file = localized_to_file(&fe, None);
        let text = to_json_string(&file).unwrap();
        let back: LocalizedFile = from_json_str(&text).unwrap();
        assert_eq!(back, file);
        let fe2 = localized_from_file(&back, &Spaces::default(), Path::new(".")).unwrap();
        assert_eq!(fe2.params, fe.params);
        assert_eq!(to_json_string(&localized_to_file(&fe2, None)).unwrap(), text);
    }

    #[test]
    fn tampered_delta_is_rejected() {
        let fe = localize(wiggle(), &q(1, 8)).unwrap();
        let mut file = localized_to_file(&fe, None);
        file.delta = q(1, 2);
        let err = localized_from_file(&file, &Spaces::default(), Path::new("."))
            .err()
            .unwrap();
        assert!(matches!(err, Error::Parse { ref path, .. } if path == "delta"), "{err}");
    }

    #[test]
    fn render_marks_holes() {
        let mut p = Patch {
            shift: Vector(vec![q(0, 1), q(0, 1)]),
            tiles: Default::default(),
        };
        let sys = crate::system::chair();
        p.tiles.insert([0, 0], 0);
        p.tiles.insert([1, 1], 1);
        let s = render_patch(&p, &sys);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[2].chars().nth(1), Some('.'));
    }
}
