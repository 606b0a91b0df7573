//! Question templates and the registry that maps heuristics onto them.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

const DEFAULT_REGISTRY: &str = include_str!("../../templates/default.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Slot {
    #[serde(rename = "wh")]
    Wh,
    #[serde(rename = "mainAux")]
    MainAux,
    #[serde(rename = "nsubj")]
    Nsubj,
    #[serde(rename = "otherAux")]
    OtherAux,
    #[serde(rename = "verb")]
    Verb,
    #[serde(rename = "obj")]
    Obj,
    #[serde(rename = "modifiers")]
    Modifiers,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Slot::Wh => "wh",
            Slot::MainAux => "mainAux",
            Slot::Nsubj => "nsubj",
            Slot::OtherAux => "otherAux",
            Slot::Verb => "verb",
            Slot::Obj => "obj",
            Slot::Modifiers => "modifiers",
        };
        f.write_str(s)
    }
}

/// Which heuristic feeds a template.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TemplateKind {
    /// Triggered by a dependency relation of the answer node.
    Dependency,
    /// Triggered by an `ARGM-*` modifier of a semantic frame.
    Modifier,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    pub key: String,
    pub kind: TemplateKind,
    /// Relation labels (dependency) or modifier suffixes such as `TMP` (modifier).
    pub triggers: Vec<String>,
    #[serde(rename = "wh")]
    pub wh_word: String,
    #[serde(rename = "slots")]
    pub slot_order: Vec<Slot>,
}

impl Template {
    pub fn has_slot(&self, slot: Slot) -> bool {
        self.slot_order.contains(&slot)
    }

    /// Templates that keep the subject in place need subject-aux inversion;
    /// templates without an `nsubj` slot question the subject itself.
    pub fn inverts(&self) -> bool {
        self.has_slot(Slot::Nsubj)
    }

    pub fn triggered_by(&self, label: &str) -> bool {
        self.triggers.iter().any(|t| t == label)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateRegistry {
    templates: Vec<Template>,
}

impl Default for TemplateRegistry {
    fn default() -> Self {
        TemplateRegistry::from_json(DEFAULT_REGISTRY).expect("bundled template registry is valid")
    }
}

impl TemplateRegistry {
    pub fn new(templates: Vec<Template>) -> Result<Self, Error> {
        let mut keys = HashSet::new();
        let mut triggers = HashSet::new();
        for t in &templates {
            if !keys.insert(t.key.clone()) {
                return Err(Error::Invalid(format!("template {:?} defined twice", t.key)));
            }
            if !t.has_slot(Slot::Wh) || !t.has_slot(Slot::Verb) {
                return Err(Error::Invalid(format!("template {:?} needs wh and verb slots", t.key)));
            }
            let unique: HashSet<_> = t.slot_order.iter().collect();
            if unique.len() != t.slot_order.len() {
                return Err(Error::Invalid(format!("template {:?} repeats a slot", t.key)));
            }
            if t.triggers.is_empty() {
                return Err(Error::Invalid(format!("template {:?} has no triggers", t.key)));
            }
            for trig in &t.triggers {
                if !triggers.insert((t.kind, trig.clone())) {
                    return Err(Error::Invalid(format!("trigger {trig:?} used by two templates")));
                }
            }
        }
        Ok(TemplateRegistry { templates })
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let templates: Vec<Template> = serde_json::from_str(text)
            .map_err(|e| Error::Invalid(format!("template registry: {e}")))?;
        TemplateRegistry::new(templates)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.templates).expect("templates serialize")
    }

    pub fn templates(&self) -> &[Template] {
        &self.templates
    }

    pub fn get(&self, key: &str) -> Option<&Template> {
        self.templates.iter().find(|t| t.key == key)
    }

    pub fn for_deprel(&self, deprel: &str) -> Option<&Template> {
        self.templates
            .iter()
            .find(|t| t.kind == TemplateKind::Dependency && t.triggered_by(deprel))
    }

    /// Template for an `ARGM-*` suffix such as `TMP`.
    pub fn for_modifier(&self, suffix: &str) -> Option<&Template> {
        self.templates
            .iter()
            .find(|t| t.kind == TemplateKind::Modifier && t.triggered_by(suffix))
    }
}
