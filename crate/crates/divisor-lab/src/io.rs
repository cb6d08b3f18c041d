//! JSON document schemas for groups, equation systems, rings, actions, and
//! presentations, plus the loaders that turn them into live objects. File
//! references inside documents resolve relative to the document's directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::crossed::{ActionError, GroupAction};
use crate::group::catalog;
use crate::group::{ElementId, FiniteGroup, GroupError, Subgroup};
use crate::homs::{FinitePresentation, HomError, Indexing};
use crate::ring::{
    unit_group, FiniteRing, RingElem, RingEquationSystem, RingError, RingFactor, RingTerm,
};
use crate::words::{parse_word, GeneralizedEquation, GeneralizedSystem, ParseError, SystemError};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("i/o error reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown element name {0:?}")]
    UnknownElement(String),
    #[error("bad document: {0}")]
    BadDoc(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Hom(#[from] HomError),
}

fn read_file(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Group ingestion document: full multiplication table with the identity at
/// index 0 (tables with the identity elsewhere are relabeled on load).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupDoc {
    pub order: usize,
    pub names: Vec<String>,
    pub table: Vec<Vec<ElementId>>,
}

impl GroupDoc {
    pub fn from_group(group: &FiniteGroup) -> Self {
        GroupDoc {
            order: group.order(),
            names: group.names().to_vec(),
            table: group.table_rows(),
        }
    }
}

/// How a document names a group: a catalog spec string, an explicit
/// `{"catalog": ...}` or `{"file": ...}` object, or an inline table.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Spec(String),
    Catalog { catalog: String },
    File { file: PathBuf },
    Inline(GroupDoc),
}

pub fn group_from_doc(doc: &GroupDoc) -> Result<FiniteGroup, LoadError> {
    if doc.table.len() != doc.order || doc.names.len() != doc.order {
        return Err(LoadError::BadDoc(format!(
            "order {} does not match table/name lengths",
            doc.order
        )));
    }
    Ok(FiniteGroup::from_table(
        doc.table.clone(),
        doc.names.clone(),
    )?)
}

pub fn load_group_file(path: &Path) -> Result<FiniteGroup, LoadError> {
    let doc: GroupDoc = serde_json::from_str(&read_file(path)?)?;
    group_from_doc(&doc)
}

pub fn resolve_group(reference: &GroupRef, base_dir: &Path) -> Result<FiniteGroup, LoadError> {
    match reference {
        GroupRef::Spec(spec) | GroupRef::Catalog { catalog: spec } => {
            Ok(catalog::build(&catalog::parse_spec(spec)?)?)
        }
        GroupRef::File { file } => load_group_file(&base_dir.join(file)),
        GroupRef::Inline(doc) => group_from_doc(doc),
    }
}

fn element_by_name(group: &FiniteGroup, name: &str) -> Result<ElementId, LoadError> {
    group
        .element_by_name(name)
        .ok_or_else(|| LoadError::UnknownElement(name.to_string()))
}

/// One equation: a DSL word constrained either to a double coset (subgroup
/// generator names plus a representative) or to equal 1 (`"eq1": true`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquationDoc {
    pub word: String,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub subgroup_generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eq1: Option<bool>,
}

impl EquationDoc {
    pub fn plain(word: impl Into<String>) -> Self {
        EquationDoc {
            word: word.into(),
            subgroup_generators: None,
            g: None,
            eq1: Some(true),
        }
    }
}

/// System document: group reference, unknown names, coefficient bindings
/// (name to element name), equations, and the marked subsystem indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemDoc {
    pub group: GroupRef,
    pub unknowns: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub coefficients: BTreeMap<String, String>,
    pub equations: Vec<EquationDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subsystem: Vec<usize>,
}

pub fn system_from_doc(doc: &SystemDoc, base_dir: &Path) -> Result<GeneralizedSystem, LoadError> {
    let group = resolve_group(&doc.group, base_dir)?;
    let mut coeffs: BTreeMap<String, ElementId> = BTreeMap::new();
    for (name, element_name) in &doc.coefficients {
        coeffs.insert(name.clone(), element_by_name(&group, element_name)?);
    }
    let mut equations = Vec::with_capacity(doc.equations.len());
    for eq in &doc.equations {
        let word = parse_word(&eq.word, &doc.unknowns, &coeffs, &group)?;
        let plain = eq.eq1.unwrap_or(false);
        if plain && (eq.subgroup_generators.is_some() || eq.g.is_some()) {
            return Err(LoadError::BadDoc(
                "an equation cannot be both plain (eq1) and constrained (H/g)".into(),
            ));
        }
        let equation = if plain || (eq.subgroup_generators.is_none() && eq.g.is_none()) {
            GeneralizedEquation::plain(&group, word)
        } else {
            let gen_ids = eq
                .subgroup_generators
                .as_deref()
                .unwrap_or(&[])
                .iter()
                .map(|n| element_by_name(&group, n))
                .collect::<Result<Vec<_>, _>>()?;
            let subgroup: Subgroup = group.subgroup_generated(&gen_ids);
            let rep = match &eq.g {
                Some(name) => element_by_name(&group, name)?,
                None => group.identity(),
            };
            GeneralizedEquation::new(word, subgroup, rep)
        };
        equations.push(equation);
    }
    Ok(GeneralizedSystem::new(
        group,
        doc.unknowns.len(),
        equations,
        doc.subsystem.clone(),
    )?)
}

pub fn load_system_file(path: &Path) -> Result<GeneralizedSystem, LoadError> {
    let doc: SystemDoc = serde_json::from_str(&read_file(path)?)?;
    let base = path.parent().unwrap_or(Path::new("."));
    system_from_doc(&doc, base)
}

/// Ring backend selector.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RingDoc {
    Modint { k: u64 },
    Matrix { k: u64, d: usize },
    Groupring { k: u64, group: GroupRef },
}

pub fn ring_from_doc(doc: &RingDoc, base_dir: &Path) -> Result<FiniteRing, LoadError> {
    Ok(match doc {
        RingDoc::Modint { k } => FiniteRing::modint(*k)?,
        RingDoc::Matrix { k, d } => FiniteRing::matrix_ring(*k, *d)?,
        RingDoc::Groupring { k, group } => {
            FiniteRing::group_ring(*k, resolve_group(group, base_dir)?)?
        }
    })
}

/// Ring element literal: a number means n * 1 in any backend; nested arrays
/// give matrix entries; `{"<element name>": coeff, ...}` objects give
/// group-ring elements.
pub fn elem_from_doc(
    ring: &FiniteRing,
    group_for_names: Option<&FiniteGroup>,
    value: &serde_json::Value,
) -> Result<RingElem, LoadError> {
    use serde_json::Value;
    if let Some(n) = value.as_i64() {
        return Ok(ring.from_integer(n));
    }
    let reduce = |n: i64| {
        let k = ring.modulus() as i64;
        (((n % k) + k) % k) as u64
    };
    match value {
        Value::Array(rows) => {
            let mut coords = Vec::new();
            for row in rows {
                let row = row.as_array().ok_or_else(|| {
                    LoadError::BadDoc("matrix literal needs nested arrays".into())
                })?;
                for entry in row {
                    let n = entry.as_i64().ok_or_else(|| {
                        LoadError::BadDoc("matrix entries must be integers".into())
                    })?;
                    coords.push(reduce(n));
                }
            }
            Ok(ring.element(coords)?)
        }
        Value::Object(map) => {
            let group = group_for_names.ok_or_else(|| {
                LoadError::BadDoc("named element literals need a group-ring backend".into())
            })?;
            let mut acc = ring.zero();
            for (name, coeff) in map {
                let id = element_by_name(group, name)?;
                let c = coeff.as_i64().ok_or_else(|| {
                    LoadError::BadDoc("group-ring coefficients must be integers".into())
                })?;
                let basis = ring.group_basis(id)?;
                let scaled = ring.mul(&basis, &ring.from_integer(reduce(c) as i64));
                acc = ring.add(&acc, &scaled);
            }
            Ok(acc)
        }
        _ => Err(LoadError::BadDoc(format!(
            "cannot read a ring element from {value}"
        ))),
    }
}

/// One monomial factor: `{"scalar": <elem>}` or `{"var": "x", "exp": k}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FactorDoc {
    Scalar {
        scalar: serde_json::Value,
    },
    VarPow {
        var: String,
        #[serde(default = "default_exp")]
        exp: i64,
    },
}

fn default_exp() -> i64 {
    1
}

/// One monomial as a factor list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingTermDoc {
    pub factors: Vec<FactorDoc>,
}

/// How the unit subgroup is supplied: the string `"units"` asks for the full
/// unit group of a small ring; otherwise an explicit group plus one ring
/// image per element (id order).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UnitGroupDoc {
    Discover(String),
    Embedded {
        group: GroupRef,
        images: Vec<serde_json::Value>,
    },
}

/// Ring system document: backend, unknowns, unit subgroup, and equations as
/// term lists (each equation reads "sum of terms = 0").
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingSystemDoc {
    pub ring: RingDoc,
    pub unknowns: Vec<String>,
    pub unit_group: UnitGroupDoc,
    pub equations: Vec<Vec<RingTermDoc>>,
}

pub fn ring_system_from_doc(
    doc: &RingSystemDoc,
    base_dir: &Path,
) -> Result<RingEquationSystem, LoadError> {
    let ring = ring_from_doc(&doc.ring, base_dir)?;
    let ring_group = match &doc.ring {
        RingDoc::Groupring { group, .. } => Some(resolve_group(group, base_dir)?),
        _ => None,
    };
    let (units, embedding) = match &doc.unit_group {
        UnitGroupDoc::Discover(tag) if tag == "units" => unit_group(&ring)?,
        UnitGroupDoc::Discover(other) => {
            return Err(LoadError::BadDoc(format!(
                "unknown unit_group tag {other:?}, expected \"units\""
            )));
        }
        UnitGroupDoc::Embedded { group, images } => {
            let g = resolve_group(group, base_dir)?;
            let imgs = images
                .iter()
                .map(|v| elem_from_doc(&ring, ring_group.as_ref(), v))
                .collect::<Result<Vec<_>, _>>()?;
            (g, imgs)
        }
    };
    let var_index = |name: &str| -> Result<usize, LoadError> {
        doc.unknowns
            .iter()
            .position(|u| u == name)
            .map(|i| i + 1)
            .ok_or_else(|| LoadError::UnknownElement(name.to_string()))
    };
    let mut equations = Vec::with_capacity(doc.equations.len());
    for term_docs in &doc.equations {
        let mut terms = Vec::with_capacity(term_docs.len());
        for term in term_docs {
            let mut factors = Vec::with_capacity(term.factors.len());
            for f in &term.factors {
                factors.push(match f {
                    FactorDoc::Scalar { scalar } => {
                        RingFactor::Scalar(elem_from_doc(&ring, ring_group.as_ref(), scalar)?)
                    }
                    FactorDoc::VarPow { var, exp } => RingFactor::VarPow {
                        var: var_index(var)?,
                        exp: *exp,
                    },
                });
            }
            terms.push(RingTerm { factors });
        }
        equations.push(terms);
    }
    Ok(RingEquationSystem::new(
        ring,
        doc.unknowns.len(),
        equations,
        units,
        embedding,
    )?)
}

pub fn load_ring_system_file(path: &Path) -> Result<RingEquationSystem, LoadError> {
    let doc: RingSystemDoc = serde_json::from_str(&read_file(path)?)?;
    let base = path.parent().unwrap_or(Path::new("."));
    ring_system_from_doc(&doc, base)
}

/// Action document: actor/target group references and one permutation (by
/// image ids) per actor element name; the identity may be omitted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionDoc {
    pub actor: GroupRef,
    pub target: GroupRef,
    pub perms: BTreeMap<String, Vec<ElementId>>,
}

impl ActionDoc {
    pub fn from_action(action: &GroupAction) -> Self {
        let actor = action.actor();
        let perms = actor
            .elements()
            .skip(1)
            .map(|f| (actor.name(f).to_string(), action.perms()[f].clone()))
            .collect();
        ActionDoc {
            actor: GroupRef::Inline(GroupDoc::from_group(actor)),
            target: GroupRef::Inline(GroupDoc::from_group(action.target())),
            perms,
        }
    }
}

pub fn action_from_doc(doc: &ActionDoc, base_dir: &Path) -> Result<GroupAction, LoadError> {
    let actor = resolve_group(&doc.actor, base_dir)?;
    let target = resolve_group(&doc.target, base_dir)?;
    let identity_perm: Vec<ElementId> = target.elements().collect();
    let mut perms = vec![identity_perm; actor.order()];
    let mut provided = vec![false; actor.order()];
    provided[0] = true;
    for (name, perm) in &doc.perms {
        let f = element_by_name(&actor, name)?;
        perms[f] = perm.clone();
        provided[f] = true;
    }
    if let Some(missing) = (0..actor.order()).find(|&f| !provided[f]) {
        return Err(LoadError::BadDoc(format!(
            "no permutation given for actor element {:?}",
            actor.name(missing)
        )));
    }
    Ok(GroupAction::new(actor, target, perms)?)
}

pub fn load_action_file(path: &Path) -> Result<GroupAction, LoadError> {
    let doc: ActionDoc = serde_json::from_str(&read_file(path)?)?;
    let base = path.parent().unwrap_or(Path::new("."));
    action_from_doc(&doc, base)
}

/// Presentation document: generator names, relator words over them, a degree
/// per generator, and the modulus n.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresentationDoc {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    pub deg: BTreeMap<String, u64>,
    pub n: u64,
}

pub fn presentation_from_doc(
    doc: &PresentationDoc,
    group: &FiniteGroup,
) -> Result<(FinitePresentation, Indexing), LoadError> {
    let relators = doc
        .relators
        .iter()
        .map(|text| parse_word(text, &doc.generators, &BTreeMap::new(), group))
        .collect::<Result<Vec<_>, _>>()?;
    let presentation = FinitePresentation::new(doc.generators.len(), relators)?;
    let degrees = doc
        .generators
        .iter()
        .map(|g| {
            doc.deg
                .get(g)
                .copied()
                .ok_or_else(|| LoadError::BadDoc(format!("no degree for generator {g:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let indexing = Indexing::new(&presentation, doc.n, degrees)?;
    Ok((presentation, indexing))
}

pub fn load_presentation_file(
    path: &Path,
    group: &FiniteGroup,
) -> Result<(FinitePresentation, Indexing), LoadError> {
    let doc: PresentationDoc = serde_json::from_str(&read_file(path)?)?;
    presentation_from_doc(&doc, group)
}
