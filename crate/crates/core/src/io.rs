//! On-disk formats: group specs (JSON or TOML), set files, progression and
//! Bohr specs, Freiman map files, and regularity certificates. All rationals
//! travel as "num/den" strings.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::progression::{
    BohrSpec, CosetProgressionSpec, GapSpec, GeneralizedProgressionSpec, ProgressionBase,
};
use crate::rat::{rat_from_str, rat_to_string, Rat};
use crate::regularity::{CertVariant, RegularityCertificate, StructuredPart};
use crate::set::GroupSet;
use crate::subgroup::Subgroup;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::sync::Arc;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GroupFile {
    Abelian { moduli: Vec<u32> },
    Cayley {
        order: usize,
        identity: u32,
        table: Vec<Vec<u32>>,
        #[serde(default)]
        trusted: bool,
    },
}

impl GroupFile {
    pub fn build(&self, max_order: usize) -> Result<FiniteGroup> {
        match self {
            GroupFile::Abelian { moduli } => FiniteGroup::abelian_with_cap(moduli, max_order),
            GroupFile::Cayley {
                order,
                identity,
                table,
                trusted,
            } => {
                if table.len() != *order {
                    return Err(Error::input(format!(
                        "cayley table has {} rows, declared order {order}",
                        table.len()
                    )));
                }
                FiniteGroup::from_cayley_with_cap(table, *identity, *trusted, max_order)
            }
        }
    }

    pub fn from_group(group: &FiniteGroup) -> GroupFile {
        match group.repr() {
            crate::group::GroupRepr::Abelian { moduli } => GroupFile::Abelian {
                moduli: moduli.clone(),
            },
            crate::group::GroupRepr::Cayley { table, identity } => {
                let n = group.order();
                let rows = (0..n)
                    .map(|a| table[a * n..(a + 1) * n].to_vec())
                    .collect();
                GroupFile::Cayley {
                    order: n,
                    identity: *identity,
                    table: rows,
                    trusted: false,
                }
            }
        }
    }
}

/// A group reference is either an inline spec or a path to one.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Path(String),
    Inline(GroupFile),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetFile {
    pub group: GroupRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bitset_hex: Option<String>,
}

pub fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
}

/// Group files may be JSON or TOML; the extension decides.
pub fn load_group_file(path: &Path, max_order: usize) -> Result<Arc<FiniteGroup>> {
    let text = read_to_string(path)?;
    let spec: GroupFile = if path.extension().and_then(|e| e.to_str()) == Some("toml") {
        toml::from_str(&text).map_err(|e| Error::input(format!("{}: {e}", path.display())))?
    } else {
        serde_json::from_str(&text)
            .map_err(|e| Error::input(format!("{}: {e}", path.display())))?
    };
    Ok(Arc::new(spec.build(max_order)?))
}

pub fn resolve_group(reference: &GroupRef, base: &Path, max_order: usize) -> Result<Arc<FiniteGroup>> {
    match reference {
        GroupRef::Path(p) => load_group_file(&base.join(p), max_order),
        GroupRef::Inline(spec) => Ok(Arc::new(spec.build(max_order)?)),
    }
}

pub fn load_set_file(path: &Path, max_order: usize) -> Result<GroupSet> {
    let text = read_to_string(path)?;
    let spec: SetFile = serde_json::from_str(&text)
        .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let group = resolve_group(&spec.group, base, max_order)?;
    match (&spec.elements, &spec.bitset_hex) {
        (Some(elems), None) => GroupSet::from_elements(&group, elems),
        (None, Some(hex)) => GroupSet::from_hex(&group, hex),
        _ => Err(Error::input(
            "set file needs exactly one of elements / bitset_hex",
        )),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatStr(pub String);

impl RatStr {
    pub fn to_rat(&self) -> Result<Rat> {
        rat_from_str(&self.0)
    }

    pub fn from_rat(q: &Rat) -> RatStr {
        RatStr(rat_to_string(q))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapPart {
    pub gens: Vec<u32>,
    pub lengths: Vec<String>,
}

/// Progression spec file: a GAP or word-budget part plus a subgroup part
/// given by generators.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProgressionFile {
    pub group: GroupRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<GapPart>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generalized: Option<GapPart>,
    #[serde(default)]
    pub subgroup: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<usize>,
}

pub fn load_progression_file(path: &Path, max_order: usize) -> Result<CosetProgressionSpec> {
    let text = read_to_string(path)?;
    let spec: ProgressionFile = serde_json::from_str(&text)
        .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let group = resolve_group(&spec.group, base, max_order)?;
    progression_from_parts(&group, &spec)
}

pub fn progression_from_parts(
    group: &Arc<FiniteGroup>,
    spec: &ProgressionFile,
) -> Result<CosetProgressionSpec> {
    let parse_lengths = |ls: &[String]| -> Result<Vec<Rat>> {
        ls.iter().map(|s| rat_from_str(s)).collect()
    };
    let base = match (&spec.gap, &spec.generalized) {
        (Some(g), None) => ProgressionBase::Gap(GapSpec {
            group: Arc::clone(group),
            generators: g.gens.clone(),
            lengths: parse_lengths(&g.lengths)?,
        }),
        (None, Some(g)) => ProgressionBase::Generalized(GeneralizedProgressionSpec {
            group: Arc::clone(group),
            generators: g.gens.clone(),
            lengths: parse_lengths(&g.lengths)?,
        }),
        (None, None) => ProgressionBase::Gap(GapSpec {
            group: Arc::clone(group),
            generators: Vec::new(),
            lengths: Vec::new(),
        }),
        _ => {
            return Err(Error::input(
                "progression file needs at most one of gap / generalized",
            ))
        }
    };
    let subgroup = crate::subgroup::generate_closure(group, &spec.subgroup)?;
    let cp = CosetProgressionSpec::new(base, subgroup)?;
    match spec.step {
        Some(s) => cp.with_claimed_step(s),
        None => Ok(cp),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharacterEntry {
    pub num: i64,
    pub den: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BohrFile {
    pub group: GroupRef,
    pub characters: Vec<Vec<CharacterEntry>>,
    pub delta: String,
}

pub fn load_bohr_file(path: &Path, max_order: usize) -> Result<BohrSpec> {
    let text = read_to_string(path)?;
    let spec: BohrFile = serde_json::from_str(&text)
        .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let group = resolve_group(&spec.group, base, max_order)?;
    bohr_from_parts(&group, &spec)
}

pub fn bohr_from_parts(group: &Arc<FiniteGroup>, spec: &BohrFile) -> Result<BohrSpec> {
    let characters: Vec<Vec<Rat>> = spec
        .characters
        .iter()
        .map(|ch| {
            ch.iter()
                .map(|e| {
                    if e.den == 0 {
                        Err(Error::input("character with zero denominator"))
                    } else {
                        Ok(crate::rat::rat(e.num, e.den))
                    }
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    BohrSpec::new(Arc::clone(group), characters, rat_from_str(&spec.delta)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapFile {
    pub source: GroupRef,
    pub target: GroupRef,
    pub pairs: Vec<(u32, u32)>,
}

pub fn load_map_file(path: &Path, max_order: usize) -> Result<crate::freiman::FreimanMap> {
    let text = read_to_string(path)?;
    let spec: MapFile = serde_json::from_str(&text)
        .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let source = resolve_group(&spec.source, base, max_order)?;
    let target = resolve_group(&spec.target, base, max_order)?;
    crate::freiman::FreimanMap::new(source, target, spec.pairs)
}

/// Certificates on disk: all sets as element lists, rationals as strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateFile {
    pub variant: CertVariant,
    pub group: GroupFile,
    pub set_a: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub progression: Option<ProgressionPart>,
    pub cover: Vec<u32>,
    pub selector: Vec<u32>,
    pub error_set: Vec<u32>,
    pub epsilon: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived_epsilon: Option<String>,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProgressionPart {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<GapPart>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generalized: Option<GapPart>,
    #[serde(default)]
    pub subgroup: Vec<u32>,
}

impl CertificateFile {
    pub fn from_certificate(cert: &RegularityCertificate) -> CertificateFile {
        let (subgroup, progression) = match &cert.structured {
            StructuredPart::Subgroup(h) => (Some(h.set().elements()), None),
            StructuredPart::Progression(p) => {
                let part = GapPart {
                    gens: p.base.generators().to_vec(),
                    lengths: p.base.lengths().iter().map(rat_to_string).collect(),
                };
                let (gap, generalized) = match &p.base {
                    ProgressionBase::Gap(_) => (Some(part), None),
                    ProgressionBase::Generalized(_) => (None, Some(part)),
                };
                (
                    None,
                    Some(ProgressionPart {
                        gap,
                        generalized,
                        subgroup: p.subgroup.set().elements(),
                    }),
                )
            }
        };
        CertificateFile {
            variant: cert.variant,
            group: GroupFile::from_group(cert.set_a.group()),
            set_a: cert.set_a.elements(),
            subgroup,
            progression,
            cover: cert.cover.elements(),
            selector: cert.selector.elements(),
            error_set: cert.error_set.elements(),
            epsilon: rat_to_string(&cert.epsilon),
            derived_epsilon: cert.derived_epsilon.as_ref().map(rat_to_string),
            satisfied: cert.satisfied,
        }
    }

    pub fn to_certificate(&self, max_order: usize) -> Result<RegularityCertificate> {
        let group = Arc::new(self.group.build(max_order)?);
        let set_a = GroupSet::from_elements(&group, &self.set_a)?;
        let structured = match (&self.subgroup, &self.progression) {
            (Some(h), None) => {
                let set = GroupSet::from_elements(&group, h)?;
                StructuredPart::Subgroup(Subgroup::from_set(set)?)
            }
            (None, Some(p)) => {
                let file = ProgressionFile {
                    group: GroupRef::Inline(self.group.clone()),
                    gap: p.gap.clone(),
                    generalized: p.generalized.clone(),
                    subgroup: p.subgroup.clone(),
                    step: None,
                };
                StructuredPart::Progression(progression_from_parts(&group, &file)?)
            }
            _ => {
                return Err(Error::input(
                    "certificate needs exactly one of subgroup / progression",
                ))
            }
        };
        Ok(RegularityCertificate {
            variant: self.variant,
            set_a,
            structured,
            cover: GroupSet::from_elements(&group, &self.cover)?,
            selector: GroupSet::from_elements(&group, &self.selector)?,
            error_set: GroupSet::from_elements(&group, &self.error_set)?,
            epsilon: rat_from_str(&self.epsilon)?,
            derived_epsilon: self
                .derived_epsilon
                .as_ref()
                .map(|s| rat_from_str(s))
                .transpose()?,
            satisfied: self.satisfied,
        })
    }
}
