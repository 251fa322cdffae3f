use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Result;
use frameforge_core::io::FrameFile;
use frameforge_core::kripke::Violation;
use frameforge_core::search::{Outcome, SearchResult};
use serde::Serialize;

pub struct Out {
    pub json: bool,
}

impl Out {
    pub fn emit(&self, value: &impl Serialize, text: impl FnOnce() -> String) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(value).expect("serializable output"));
        } else {
            println!("{}", text());
        }
    }

    /// Writes `file` to `dest` when given; prints it as JSON or as a listing.
    pub fn frame(&self, file: &FrameFile, dest: Option<&Path>) -> Result<()> {
        if let Some(path) = dest {
            super::write_json(path, file)?;
        }
        if self.json {
            println!("{}", file.to_json());
        } else {
            println!("{}", frame_text(file));
            if let Some(path) = dest {
                println!("wrote {}", path.display());
            }
        }
        Ok(())
    }
}

pub fn frame_text(file: &FrameFile) -> String {
    let mut lines = Vec::new();
    match file {
        FrameFile::Kripke(k) => {
            lines.push(format!(
                "kripke frame: {} worlds, {} relations{}",
                k.worlds.len(),
                k.relations.len(),
                k.root.as_ref().map(|r| format!(", root {r}")).unwrap_or_default()
            ));
            for (i, rel) in k.relations.iter().enumerate() {
                for (a, b) in rel {
                    lines.push(format!("R{} {a} -> {b}", i + 1));
                }
            }
        }
        FrameFile::Nbhd(n) => {
            lines.push(format!("nbhd frame: {} points, {} modalities", n.points.len(), n.bases.len()));
            for (i, per_point) in n.bases.iter().enumerate() {
                for x in &n.points {
                    let sets: Vec<String> = per_point
                        .get(x)
                        .map(|family| family.iter().map(|s| format!("{{{}}}", s.join(" "))).collect())
                        .unwrap_or_default();
                    lines.push(format!("N{} {x}: {}", i + 1, sets.join(" ")));
                }
            }
        }
        FrameFile::Topology(t) => {
            lines.push(format!("topology: {} points, {} opens", t.points.len(), t.opens.len()));
        }
    }
    lines.join("\n")
}

pub fn valuation_text(val: &BTreeMap<String, Vec<String>>) -> String {
    if val.is_empty() {
        return "any valuation".into();
    }
    val.iter()
        .map(|(v, ws)| format!("{v} = {{{}}}", ws.join(", ")))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn violation_text(v: &Violation) -> String {
    match v {
        Violation::NotSurjective { target } => format!("not surjective: {target} has no preimage"),
        Violation::Monotonicity { modality, from, to } => {
            format!("R{modality} {from} -> {to} is not preserved")
        }
        Violation::Lifting {
            modality,
            world,
            target_successor,
        } => format!("R{modality} successor {target_successor} of the image of {world} does not lift"),
        Violation::Forward { modality, point, base_set } => {
            format!("N{modality} at {point}: image of {{{}}} is not a neighborhood", base_set.join(" "))
        }
        Violation::Back { modality, point, target_set } => {
            format!("N{modality} at {point}: no base set maps into {{{}}}", target_set.join(" "))
        }
    }
}

pub fn search_text(r: &SearchResult) -> String {
    let scope = if r.exhaustive { "exhaustive" } else { "sampled" };
    let head = match &r.outcome {
        Outcome::Refuted { witness } => {
            let val = match &witness.frame {
                FrameFile::Kripke(k) => k.valuation.clone().unwrap_or_default(),
                FrameFile::Nbhd(n) => n.valuation.clone().unwrap_or_default(),
                FrameFile::Topology(_) => BTreeMap::new(),
            };
            format!(
                "refuted: frame #{} at {} with {}\n{}",
                witness.index,
                witness.world,
                valuation_text(&val),
                frame_text(&witness.frame)
            )
        }
        Outcome::Exhausted => "exhausted: no refutation".into(),
        Outcome::ValidatedUpToCap => "validated up to cap: no refutation".into(),
    };
    format!(
        "{head}\n{} search over {}, {} frames checked, {} skipped",
        scope, r.kind, r.frames_checked, r.skipped
    )
}
