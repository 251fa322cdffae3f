//! JSON file formats for frames, models and topologies.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kripke::{KripkeError, KripkeFrame, KripkeModel};
use crate::neighborhood::{NbhdError, NeighborhoodFrame, NeighborhoodModel, Topology};
use crate::semantics::{self, Valuation};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("expected a {expected} file, found {found}")]
    WrongType { expected: &'static str, found: &'static str },
    #[error(transparent)]
    Kripke(#[from] KripkeError),
    #[error(transparent)]
    Nbhd(#[from] NbhdError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json {
            line: e.line(),
            column: e.column(),
            // serde_json appends " at line L column C"; the variant carries those already.
            message: {
                let full = e.to_string();
                match full.rfind(" at line ") {
                    Some(cut) => full[..cut].to_string(),
                    None => full,
                }
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KripkeFile {
    pub worlds: Vec<String>,
    pub relations: Vec<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuation: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbhdFile {
    pub points: Vec<String>,
    pub bases: Vec<BTreeMap<String, Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuation: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyFile {
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FrameFile {
    Kripke(KripkeFile),
    Nbhd(NbhdFile),
    Topology(TopologyFile),
}

impl FrameFile {
    pub fn kind(&self) -> &'static str {
        match self {
            FrameFile::Kripke(_) => "kripke",
            FrameFile::Nbhd(_) => "nbhd",
            FrameFile::Topology(_) => "topology",
        }
    }

    /// Parses a file, reporting errors at their position in `text`.
    pub fn parse(text: &str) -> Result<Self, IoError> {
        // Tagged enums buffer their content and lose positions, so read the
        // tag first and then parse the concrete layout from the text.
        #[derive(Deserialize)]
        struct Tag {
            #[serde(rename = "type")]
            kind: String,
        }
        let tag: Tag = serde_json::from_str(text)?;
        match tag.kind.as_str() {
            "kripke" => Ok(FrameFile::Kripke(serde_json::from_str(text)?)),
            "nbhd" => Ok(FrameFile::Nbhd(serde_json::from_str(text)?)),
            "topology" => Ok(FrameFile::Topology(serde_json::from_str(text)?)),
            other => Err(IoError::Json {
                line: 1,
                column: 1,
                message: format!("unknown frame type '{other}'"),
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("frame files serialize")
    }

    pub fn into_kripke(self) -> Result<KripkeFile, IoError> {
        match self {
            FrameFile::Kripke(k) => Ok(k),
            other => Err(IoError::WrongType {
                expected: "kripke",
                found: other.kind(),
            }),
        }
    }

    pub fn into_nbhd(self) -> Result<NbhdFile, IoError> {
        match self {
            FrameFile::Nbhd(n) => Ok(n),
            other => Err(IoError::WrongType {
                expected: "nbhd",
                found: other.kind(),
            }),
        }
    }
}

impl KripkeFile {
    pub fn from_frame(frame: &KripkeFrame) -> Self {
        KripkeFile {
            worlds: frame.worlds().to_vec(),
            relations: (1..=frame.modality_count()).map(|i| frame.named_edges(i)).collect(),
            root: frame.root().map(|r| frame.world_name(r).to_string()),
            valuation: None,
            meta: None,
        }
    }

    pub fn from_model(model: &KripkeModel) -> Self {
        KripkeFile {
            valuation: Some(model.named_valuation()),
            ..KripkeFile::from_frame(&model.frame)
        }
    }

    pub fn to_frame(&self) -> Result<KripkeFrame, IoError> {
        Ok(KripkeFrame::from_names(&self.worlds, &self.relations, self.root.as_deref())?)
    }

    /// The model of the file; a missing valuation is empty.
    pub fn to_model(&self) -> Result<KripkeModel, IoError> {
        let frame = self.to_frame()?;
        let val = self.valuation.clone().unwrap_or_default();
        Ok(KripkeModel::from_names(frame, &val)?)
    }
}

impl NbhdFile {
    pub fn from_frame(frame: &NeighborhoodFrame) -> Self {
        let bases = (1..=frame.modality_count())
            .map(|i| {
                (0..frame.size())
                    .map(|x| (frame.points()[x].clone(), frame.named_base(i, x)))
                    .collect()
            })
            .collect();
        NbhdFile {
            points: frame.points().to_vec(),
            bases,
            valuation: None,
            meta: None,
        }
    }

    pub fn from_model(model: &NeighborhoodModel) -> Self {
        NbhdFile {
            valuation: Some(semantics::named_valuation(&model.frame, &model.valuation)),
            ..NbhdFile::from_frame(&model.frame)
        }
    }

    pub fn to_frame(&self) -> Result<NeighborhoodFrame, IoError> {
        Ok(NeighborhoodFrame::from_names(&self.points, &self.bases)?)
    }

    pub fn to_model(&self) -> Result<NeighborhoodModel, IoError> {
        let frame = self.to_frame()?;
        let val = self.valuation.clone().unwrap_or_default();
        Ok(NeighborhoodModel::from_names(frame, &val)?)
    }
}

impl TopologyFile {
    pub fn to_topology(&self) -> Result<Topology, IoError> {
        Ok(Topology::from_names(&self.points, &self.opens)?)
    }
}

/// Name-level view of a valuation over any frame.
pub fn valuation_names<S: semantics::FrameSemantics>(frame: &S, val: &Valuation) -> BTreeMap<String, Vec<String>> {
    semantics::named_valuation(frame, val)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kripke_round_trip() {
        let text = r#"{"type":"kripke","worlds":["a","b"],"relations":[[["a","b"]],[["b","b"]]],"root":"a","valuation":{"p":["a"]}}"#;
        let file = FrameFile::parse(text).unwrap().into_kripke().unwrap();
        let model = file.to_model().unwrap();
        assert_eq!(model.frame.modality_count(), 2);
        assert!(model.frame.has_edge(2, 1, 1));
        let again = KripkeFile::from_model(&model);
        assert_eq!(again, file);
    }

    #[test]
    fn nbhd_round_trip() {
        let text = r#"{"type":"nbhd","points":["a","b"],"bases":[{"a":[["b"]],"b":[[]]}]}"#;
        let file = FrameFile::parse(text).unwrap().into_nbhd().unwrap();
        let frame = file.to_frame().unwrap();
        assert_eq!(frame.named_base(1, 0), vec![vec!["b".to_string()]]);
        assert_eq!(NbhdFile::from_frame(&frame), file);
    }

    #[test]
    fn json_errors_have_positions() {
        let err = FrameFile::parse("{\n  \"type\": \"kripke\",\n  \"worlds\": [1]\n}").unwrap_err();
        assert!(matches!(err, IoError::Json { line: 3, .. }), "{err}");
        let err = FrameFile::parse(r#"{"type":"topology","points":[],"opens":[]}"#)
            .unwrap()
            .into_kripke()
            .unwrap_err();
        assert!(matches!(err, IoError::WrongType { expected: "kripke", found: "topology" }));
    }
}
