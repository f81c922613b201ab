//! Controlled vocabularies and the project IRI scheme.
//!
//! The object-type vocabulary is the closed set of labels used by the room
//! inventory; lookups are exact-match on the trimmed, case-preserved label.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::iri::{percent_encode, Iri};
use crate::process::WorkflowStage;

/// Default base for all minted IRIs. Overridable per ingest run.
pub const DEFAULT_BASE: &str = "https://example.org/aldrovandi/";

/// CIDOC CRM namespace.
pub const CRM: &str = "http://www.cidoc-crm.org/cidoc-crm/";
/// CRMdig namespace.
pub const CRMDIG: &str = "http://www.ics.forth.gr/isl/CRMdig/";
/// RDF namespace.
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
/// XSD namespace.
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

pub fn default_base() -> Iri {
    Iri::new(DEFAULT_BASE).unwrap()
}

pub fn object_iri(base: &Iri, id: &str) -> Iri {
    base.join(&format!("obj/{}", percent_encode(id))).unwrap()
}

pub fn room_iri(base: &Iri, room: u8) -> Iri {
    base.join(&format!("room/{room}")).unwrap()
}

pub fn process_iri(base: &Iri, id: &str, stage: WorkflowStage) -> Iri {
    base.join(&format!("process/{}/{}", percent_encode(id), stage.token()))
        .unwrap()
}

pub fn asset_iri(base: &Iri, id: &str, level: u8) -> Iri {
    base.join(&format!("asset/{}/l{level}", percent_encode(id)))
        .unwrap()
}

/// The 35 object-type labels of the room inventory, in listing order.
pub const OBJECT_TYPE_LABELS: [&str; 35] = [
    "Specimen",
    "Printed volume",
    "Manuscript table",
    "Manuscript volume",
    "Illuminated manuscript",
    "Herbarium",
    "Model",
    "Woodcut",
    "Painting",
    "Cast",
    "Medal",
    "Nautical chart",
    "Map",
    "Video",
    "Print",
    "Diorama",
    "Vase",
    "Knife handle",
    "Mask",
    "Pendant",
    "Artifact",
    "Gemstone",
    "Statue",
    "Necklace",
    "Rattle",
    "Lamp",
    "Axe",
    "Microscope",
    "Compass",
    "Bottle",
    "Electrostatic machine",
    "Discharge arc",
    "Technical instrument",
    "Rooms/Painted ceilings",
    "Panels with graphics",
];

/// Acquisition techniques tracked by the digitisation workflow.
pub const TECHNIQUE_LABELS: [&str; 4] = [
    "SLS",
    "photogrammetry",
    "CG modelling",
    "reuse of existing model",
];

/// Ordered label -> term-IRI vocabulary.
#[derive(Debug, Clone)]
pub struct ObjectTypeVocab {
    terms: IndexMap<String, Iri>,
}

impl ObjectTypeVocab {
    pub fn builtin(base: &Iri) -> Self {
        let mut terms = IndexMap::new();
        for label in OBJECT_TYPE_LABELS {
            let iri = base
                .join(&format!("vocab/type/{}", percent_encode(label)))
                .unwrap();
            terms.insert(label.to_string(), iri);
        }
        ObjectTypeVocab { terms }
    }

    pub fn lookup(&self, label: &str) -> Option<&Iri> {
        self.terms.get(label.trim())
    }

    pub fn label_for(&self, iri: &Iri) -> Option<&str> {
        self.terms
            .iter()
            .find(|(_, term)| *term == iri)
            .map(|(label, _)| label.as_str())
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Publication licence, either one of the standard Creative Commons terms
/// or a custom label agreed with the holding institution.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Licence {
    Cc0,
    CcBy,
    CcByNc,
    CcByNcSa,
    Custom(String),
}

impl Licence {
    pub fn parse(label: &str) -> Licence {
        match label.trim() {
            "CC0" => Licence::Cc0,
            "CC-BY" => Licence::CcBy,
            "CC-BY-NC" => Licence::CcByNc,
            "CC-BY-NC-SA" => Licence::CcByNcSa,
            other => Licence::Custom(other.to_string()),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Licence::Cc0 => "CC0",
            Licence::CcBy => "CC-BY",
            Licence::CcByNc => "CC-BY-NC",
            Licence::CcByNcSa => "CC-BY-NC-SA",
            Licence::Custom(label) => label,
        }
    }

    /// Canonical legalcode IRI for the standard terms; custom terms are
    /// minted under the project base.
    pub fn iri(&self, base: &Iri) -> Iri {
        let canonical = match self {
            Licence::Cc0 => "https://creativecommons.org/publicdomain/zero/1.0/legalcode",
            Licence::CcBy => "https://creativecommons.org/licenses/by/4.0/legalcode",
            Licence::CcByNc => "https://creativecommons.org/licenses/by-nc/4.0/legalcode",
            Licence::CcByNcSa => "https://creativecommons.org/licenses/by-nc-sa/4.0/legalcode",
            Licence::Custom(label) => {
                return base
                    .join(&format!("licence/{}", percent_encode(label)))
                    .unwrap()
            }
        };
        Iri::new(canonical).unwrap()
    }

    pub fn is_custom(&self) -> bool {
        matches!(self, Licence::Custom(_))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VocabError {
    #[error("unknown vocabulary {0:?}")]
    UnknownVocabulary(String),
    #[error("label {label:?} not in vocabulary {vocab:?}")]
    UnknownLabel { vocab: String, label: String },
}

/// Named vocabularies available to table schemas and mapping rules.
#[derive(Debug, Clone)]
pub struct VocabRegistry {
    base: Iri,
    object_types: ObjectTypeVocab,
}

impl VocabRegistry {
    pub fn builtin(base: &Iri) -> Self {
        VocabRegistry {
            base: base.clone(),
            object_types: ObjectTypeVocab::builtin(base),
        }
    }

    pub fn object_types(&self) -> &ObjectTypeVocab {
        &self.object_types
    }

    pub fn base(&self) -> &Iri {
        &self.base
    }

    pub fn technique_iri(&self, label: &str) -> Option<Iri> {
        TECHNIQUE_LABELS
            .iter()
            .find(|l| **l == label.trim())
            .map(|l| {
                self.base
                    .join(&format!("vocab/technique/{}", percent_encode(l)))
                    .unwrap()
            })
    }

    pub fn technique_label_for(&self, iri: &Iri) -> Option<&'static str> {
        TECHNIQUE_LABELS
            .iter()
            .find(|l| self.technique_iri(l).as_ref() == Some(iri))
            .copied()
    }

    /// Resolve a label in a named vocabulary to its term IRI.
    pub fn lookup(&self, vocab: &str, label: &str) -> Result<Iri, VocabError> {
        let label = label.trim();
        match vocab {
            "object_types" => self
                .object_types
                .lookup(label)
                .cloned()
                .ok_or_else(|| VocabError::UnknownLabel {
                    vocab: vocab.to_string(),
                    label: label.to_string(),
                }),
            "licences" => Ok(Licence::parse(label).iri(&self.base)),
            "techniques" => {
                self.technique_iri(label)
                    .ok_or_else(|| VocabError::UnknownLabel {
                        vocab: vocab.to_string(),
                        label: label.to_string(),
                    })
            }
            "stage_classes" => {
                let stage: WorkflowStage =
                    label.parse().map_err(|_| VocabError::UnknownLabel {
                        vocab: vocab.to_string(),
                        label: label.to_string(),
                    })?;
                let class = if stage == WorkflowStage::Acquisition {
                    "D2_Digitization_Process"
                } else {
                    "D10_Software_Execution"
                };
                Ok(Iri::new(format!("{CRMDIG}{class}")).unwrap())
            }
            other => Err(VocabError::UnknownVocabulary(other.to_string())),
        }
    }

    pub fn is_known_vocab(&self, vocab: &str) -> bool {
        matches!(
            vocab,
            "object_types" | "licences" | "techniques" | "stage_classes"
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vocabulary_has_exactly_the_inventory_labels() {
        let vocab = ObjectTypeVocab::builtin(&default_base());
        assert_eq!(vocab.len(), 35);
        for label in OBJECT_TYPE_LABELS {
            assert!(vocab.lookup(label).is_some(), "label {label:?} must resolve");
        }
        assert!(vocab.lookup("Sculpture").is_none());
        assert!(vocab.lookup("specimen").is_none(), "lookup is case-preserving");
    }

    #[test]
    fn lookup_trims_whitespace() {
        let vocab = ObjectTypeVocab::builtin(&default_base());
        assert!(vocab.lookup(" Specimen ").is_some());
    }

    #[test]
    fn type_terms_are_distinct_and_reversible() {
        let vocab = ObjectTypeVocab::builtin(&default_base());
        let mut seen = std::collections::BTreeSet::new();
        for label in vocab.labels() {
            let iri = vocab.lookup(label).unwrap();
            assert!(seen.insert(iri.clone()), "duplicate term IRI for {label}");
            assert_eq!(vocab.label_for(iri), Some(label));
        }
    }

    #[test]
    fn licences_map_to_legalcode() {
        let base = default_base();
        assert_eq!(
            Licence::parse("CC0").iri(&base).as_str(),
            "https://creativecommons.org/publicdomain/zero/1.0/legalcode"
        );
        assert_eq!(
            Licence::parse("CC-BY-NC-SA").iri(&base).as_str(),
            "https://creativecommons.org/licenses/by-nc-sa/4.0/legalcode"
        );
        let custom = Licence::parse("agreed with holder");
        assert!(custom.is_custom());
        assert_eq!(
            custom.iri(&base).as_str(),
            "https://example.org/aldrovandi/licence/agreed%20with%20holder"
        );
    }

    #[test]
    fn registry_resolves_named_vocabularies() {
        let reg = VocabRegistry::builtin(&default_base());
        assert!(reg.lookup("object_types", "Specimen").is_ok());
        assert!(matches!(
            reg.lookup("object_types", "Sculpture"),
            Err(VocabError::UnknownLabel { .. })
        ));
        assert!(matches!(
            reg.lookup("nope", "x"),
            Err(VocabError::UnknownVocabulary(_))
        ));
        assert!(reg.lookup("techniques", "SLS").is_ok());
        assert_eq!(
            reg.lookup("stage_classes", "acquisition").unwrap().as_str(),
            "http://www.ics.forth.gr/isl/CRMdig/D2_Digitization_Process"
        );
        assert_eq!(
            reg.lookup("stage_classes", "upload").unwrap().as_str(),
            "http://www.ics.forth.gr/isl/CRMdig/D10_Software_Execution"
        );
    }

    #[test]
    fn iri_scheme_paths() {
        let base = default_base();
        assert_eq!(
            object_iri(&base, "r5 specimen").as_str(),
            "https://example.org/aldrovandi/obj/r5%20specimen"
        );
        assert_eq!(room_iri(&base, 3).as_str(), "https://example.org/aldrovandi/room/3");
        assert_eq!(
            asset_iri(&base, "x", 2).as_str(),
            "https://example.org/aldrovandi/asset/x/l2"
        );
    }
}
