//! The fibration file: a JSON document describing a positive factorization.
//!
//! ```json
//! {
//!   "label": "torus22",
//!   "base": "sphere",
//!   "fiber": { "genus": 1, "boundary": 0 },
//!   "system": "torus",
//!   "cycles": ["a", "b", { "name": "x", "class": [1, 1] }],
//!   "words": ["a b^-1"]
//! }
//! ```
//!
//! `system` is a builtin name (`"humphries"`, `"torus"`), a builtin with class
//! overrides (`{"builtin": "humphries", "classes": {"c1": [...]}}`), or an
//! inline system (`{"curves": [{"name", "class"}], "disjoint": [["x", "y"]]}`).
//! A cycle is either the name of a system curve or an explicit class with an
//! optional name. `words` are identification words over the system.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::fibration::{Base, LefschetzData};
use crate::homology::{HomologyClass, SurfaceSig};
use crate::planner::NamedClass;
use crate::words::{humphries_system, torus_system, Curve, GeneratorSystem, TwistWord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibrationFile {
    #[serde(default)]
    pub label: String,
    pub base: Base,
    pub fiber: SurfaceSig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSpec>,
    pub cycles: Vec<CycleSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub words: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemSpec {
    Builtin(String),
    Declared(SystemDecl),
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDecl {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub classes: BTreeMap<String, HomologyClass>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<NamedClass>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub disjoint: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CycleSpec {
    Named(String),
    Explicit {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        class: HomologyClass,
    },
}

/// A load failure: JSON syntax/shape errors carry a position, semantic errors
/// carry the path of the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadError {
    pub position: Option<(usize, usize)>,
    pub message: String,
}

impl LoadError {
    fn at(path: impl fmt::Display, err: impl fmt::Display) -> Self {
        LoadError { position: None, message: format!("{path}: {err}") }
    }
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some((line, column)) => write!(f, "line {line}, column {column}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl From<serde_json::Error> for LoadError {
    fn from(e: serde_json::Error) -> Self {
        let position = (e.line() > 0).then(|| (e.line(), e.column()));
        let mut message = e.to_string();
        // serde_json appends " at line L column C"; the position is reported separately.
        if let Some(cut) = message.rfind(" at line ") {
            message.truncate(cut);
        }
        LoadError { position, message }
    }
}

/// A parsed fibration file with everything resolved.
#[derive(Debug, Clone)]
pub struct LoadedFibration {
    pub file: FibrationFile,
    pub data: LefschetzData,
    pub system: Option<Arc<GeneratorSystem>>,
    pub words: Vec<TwistWord>,
}

pub fn parse_fibration(text: &str) -> Result<LoadedFibration, LoadError> {
    let file: FibrationFile = serde_json::from_str(text)?;
    file.resolve()
}

impl FibrationFile {
    pub fn resolve(self) -> Result<LoadedFibration, LoadError> {
        let fiber =
            SurfaceSig::new(self.fiber.genus, self.fiber.boundary_components).map_err(|e| LoadError::at("fiber", e))?;
        let system = match &self.system {
            None => None,
            Some(spec) => Some(Arc::new(build_system(spec, fiber).map_err(|e| LoadError::at("system", e))?)),
        };
        if let Some(s) = &system {
            if s.surface() != fiber {
                return Err(LoadError::at("system", format!("system is on {}, fiber is {fiber}", s.surface())));
            }
        }

        let mut cycles = Vec::with_capacity(self.cycles.len());
        for (i, spec) in self.cycles.iter().enumerate() {
            let path = format!("cycles[{i}]");
            let curve = match spec {
                CycleSpec::Named(name) => {
                    let Some(s) = &system else {
                        return Err(LoadError::at(
                            path,
                            format!("curve `{name}` given by name but no system is declared"),
                        ));
                    };
                    s.curve(name)
                        .cloned()
                        .ok_or_else(|| LoadError::at(&path, format!("curve `{name}` is not in the system")))?
                }
                CycleSpec::Explicit { name, class } => {
                    let name = name.clone().unwrap_or_else(|| format!("v{i}"));
                    Curve::new(name, class.clone(), fiber).map_err(|e| LoadError::at(&path, e))?
                }
            };
            cycles.push(curve);
        }
        let data = LefschetzData::new(self.base, fiber, cycles, self.label.clone())
            .map_err(|e| LoadError::at("fibration", e))?;

        let mut words = Vec::with_capacity(self.words.len());
        for (i, w) in self.words.iter().enumerate() {
            let Some(s) = &system else {
                return Err(LoadError::at(format!("words[{i}]"), "words need a declared system"));
            };
            words.push(TwistWord::parse(s.clone(), w).map_err(|e| LoadError::at(format!("words[{i}]"), e))?);
        }
        Ok(LoadedFibration { file: self, data, system, words })
    }

    /// A file listing every cycle by explicit class; `system` and `words` are
    /// carried over unchanged.
    pub fn from_data(data: &LefschetzData, system: Option<SystemSpec>, words: Vec<String>) -> Self {
        FibrationFile {
            label: data.label().to_owned(),
            base: data.base(),
            fiber: data.fiber(),
            system,
            cycles: data
                .cycles()
                .iter()
                .map(|c| CycleSpec::Explicit { name: Some(c.name.clone()), class: c.class.clone() })
                .collect(),
            words,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("fibration file serializes");
        s.push('\n');
        s
    }
}

fn build_builtin(name: &str, fiber: SurfaceSig) -> crate::Result<GeneratorSystem> {
    use crate::Error;
    match name {
        "humphries" => humphries_system(fiber.genus, fiber.boundary_components == 1),
        "torus" if fiber == SurfaceSig::closed(1) => Ok(torus_system()),
        "torus" => Err(Error::InvalidSystem(format!("torus system needs a closed genus-1 fiber, not {fiber}"))),
        other => Err(Error::InvalidSystem(format!("unknown builtin system `{other}`"))),
    }
}

fn build_system(spec: &SystemSpec, fiber: SurfaceSig) -> crate::Result<GeneratorSystem> {
    use crate::Error;
    match spec {
        SystemSpec::Builtin(name) => build_builtin(name, fiber),
        SystemSpec::Declared(decl) => match &decl.builtin {
            Some(name) => {
                if !decl.curves.is_empty() || !decl.disjoint.is_empty() {
                    return Err(Error::InvalidSystem(
                        "a builtin system takes `classes` overrides only, not `curves` or `disjoint`".into(),
                    ));
                }
                let mut system = build_builtin(name, fiber)?;
                for (curve, class) in &decl.classes {
                    system = system.with_class(curve, class.clone())?;
                }
                Ok(system)
            }
            None => {
                if !decl.classes.is_empty() {
                    return Err(Error::InvalidSystem("`classes` overrides need a `builtin`".into()));
                }
                let curves = decl
                    .curves
                    .iter()
                    .map(|c| Curve::new(c.name.clone(), c.class.clone(), fiber))
                    .collect::<crate::Result<Vec<_>>>()?;
                GeneratorSystem::new(fiber, curves, decl.disjoint.iter().map(|(a, b)| (a.as_str(), b.as_str())))
            }
        },
    }
}

/// Inline declaration of an existing system.
pub fn declare_system(system: &GeneratorSystem) -> SystemSpec {
    SystemSpec::Declared(SystemDecl {
        builtin: None,
        classes: BTreeMap::new(),
        curves: system.curves().iter().map(|c| NamedClass { name: c.name.clone(), class: c.class.clone() }).collect(),
        disjoint: system.disjoint_pairs().map(|(a, b)| (a.to_owned(), b.to_owned())).collect(),
    })
}
