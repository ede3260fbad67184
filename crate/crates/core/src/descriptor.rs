//! JSON documents: polytopes, model descriptors and region exports.
//!
//! A polytope document looks like
//!
//! ```json
//! {"dim": 2, "halfspaces": [{"a": [1, 0], "b": 1, "label": "x <= 1"}]}
//! ```
//!
//! and a model descriptor like
//!
//! ```json
//! {"function": {"name": "bilinear", "params": {"ux": 2}},
//!  "polytope": "box.json", "sense": "convex", "anchor": "origin-shift"}
//! ```
//!
//! where `polytope` is either an inline document or a path, and `anchor` is
//! `"none"`, `"origin-shift"` or a point.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::envelope::{AnchorPolicy, EnvelopeModel, Sense};
use crate::error::{Error, Result};
use crate::functions::{catalog_entry, CatalogEntry};
use crate::geometry::{enumerate_regions_2d, normalize_facet, Halfspace, Polytope};
use crate::verify::CertifyConfig;
use crate::Point;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeDocument {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
}

impl PolytopeDocument {
    pub fn from_polytope(p: &Polytope) -> Self {
        Self {
            dim: p.dim(),
            halfspaces: p.halfspaces().to_vec(),
        }
    }

    pub fn into_polytope(self) -> Result<Polytope> {
        Polytope::new(self.dim, self.halfspaces)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolytopeSource {
    Inline(PolytopeDocument),
    File(PathBuf),
}

impl PolytopeSource {
    /// Relative paths resolve against `base`.
    pub fn resolve(&self, base: Option<&Path>) -> Result<Polytope> {
        match self {
            PolytopeSource::Inline(doc) => doc.clone().into_polytope(),
            PolytopeSource::File(path) => {
                let path = match base {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path.clone(),
                };
                PolytopeDocument::load(&path)?.into_polytope()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnchorSpec {
    Named(String),
    Point(Point),
}

impl AnchorSpec {
    pub fn to_policy(&self) -> Result<AnchorPolicy> {
        match self {
            AnchorSpec::Point(t) => Ok(AnchorPolicy::TranslateTo(t.clone())),
            AnchorSpec::Named(s) => match s.as_str() {
                "none" => Ok(AnchorPolicy::None),
                "origin-shift" | "origin" => Ok(AnchorPolicy::OriginShift),
                other => Err(Error::Descriptor {
                    reason: format!("unknown anchor `{other}`"),
                }),
            },
        }
    }

    pub fn from_policy(policy: &AnchorPolicy) -> Self {
        match policy {
            AnchorPolicy::None => AnchorSpec::Named("none".into()),
            AnchorPolicy::OriginShift => AnchorSpec::Named("origin-shift".into()),
            AnchorPolicy::TranslateTo(t) => AnchorSpec::Point(t.clone()),
        }
    }
}

/// Function, domain, sense and anchor; omitted parts take the catalog defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub function: FunctionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polytope: Option<PolytopeSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sense: Option<Sense>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<AnchorSpec>,
}

/// A descriptor with the catalog lookup done and all defaults filled in.
#[derive(Debug, Clone)]
pub struct ResolvedModel {
    pub entry: CatalogEntry,
    pub polytope: Polytope,
    pub sense: Sense,
    pub anchor: AnchorPolicy,
}

impl ResolvedModel {
    pub fn build(&self, config: &CertifyConfig) -> Result<EnvelopeModel> {
        EnvelopeModel::build_with(
            self.entry.field.clone(),
            self.polytope.clone(),
            self.sense,
            self.anchor.clone(),
            config,
        )
    }
}

impl ModelDescriptor {
    pub fn named(name: impl Into<String>) -> Self {
        Self {
            function: FunctionSpec {
                name: name.into(),
                params: BTreeMap::new(),
            },
            polytope: None,
            sense: None,
            anchor: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn resolve(&self, base: Option<&Path>) -> Result<ResolvedModel> {
        let params: Vec<(String, f64)> = self.function.params.iter().map(|(k, v)| (k.clone(), *v)).collect();
        let entry = catalog_entry(&self.function.name, &params)?;
        let polytope = match &self.polytope {
            Some(src) => src.resolve(base)?,
            None => entry.default_polytope.clone(),
        };
        if polytope.dim() != entry.field.dim() {
            return Err(Error::DimensionMismatch {
                expected: entry.field.dim(),
                found: polytope.dim(),
            });
        }
        let sense = self.sense.unwrap_or(entry.envelope_sense);
        let anchor = match &self.anchor {
            Some(a) => a.to_policy()?,
            None => entry.anchor.clone(),
        };
        Ok(ResolvedModel {
            entry,
            polytope,
            sense,
            anchor,
        })
    }
}

/// One region of a planar subdivision with its normalized in/out facet vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionRecord {
    pub in_facet: Option<usize>,
    pub out_facet: usize,
    pub polygon: Vec<Point>,
    pub a_minus: Option<Point>,
    pub a_plus: Point,
}

pub fn region_records(p: &Polytope) -> Result<Vec<RegionRecord>> {
    enumerate_regions_2d(p)?
        .into_iter()
        .map(|r| {
            let a_minus = r.id.in_facet.map(|i| normalize_facet(p, i).map(|f| f.a)).transpose()?;
            Ok(RegionRecord {
                in_facet: r.id.in_facet,
                out_facet: r.id.out_facet,
                polygon: r.polygon,
                a_minus,
                a_plus: normalize_facet(p, r.id.out_facet)?.a,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polytope_document_round_trip() {
        let text = r#"{"dim": 2, "halfspaces": [
            {"a": [-1, 0], "b": 0}, {"a": [1, 0], "b": 1, "label": "x <= 1"},
            {"a": [0, -1], "b": 0}, {"a": [0, 1], "b": 1}]}"#;
        let doc: PolytopeDocument = serde_json::from_str(text).unwrap();
        assert_eq!(doc.halfspaces[1].label.as_deref(), Some("x <= 1"));
        let p = doc.clone().into_polytope().unwrap();
        assert_eq!(PolytopeDocument::from_polytope(&p), doc);
    }

    #[test]
    fn descriptor_defaults_and_overrides() {
        let d: ModelDescriptor = serde_json::from_str(
            r#"{"function": {"name": "bilinear", "params": {"ux": 2}}, "anchor": "origin-shift"}"#,
        )
        .unwrap();
        let r = d.resolve(None).unwrap();
        assert_eq!(r.sense, Sense::Convex);
        assert_eq!(r.anchor, AnchorPolicy::OriginShift);
        assert_eq!(r.polytope.bounds()[0], [0.0, 2.0]);

        let d: ModelDescriptor =
            serde_json::from_str(r#"{"function": {"name": "fractional"}, "anchor": [1, 0], "sense": "convex"}"#).unwrap();
        assert_eq!(d.resolve(None).unwrap().anchor, AnchorPolicy::TranslateTo(vec![1.0, 0.0]));

        let d: ModelDescriptor = serde_json::from_str(r#"{"function": {"name": "cubic"}, "anchor": "sideways"}"#).unwrap();
        assert!(matches!(d.resolve(None), Err(Error::Descriptor { .. })));
    }

    #[test]
    fn inline_and_file_polytopes() {
        let dir = std::env::temp_dir().join(format!("rayvex-desc-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let doc = PolytopeDocument::from_polytope(&Polytope::from_box(&[0.0, 0.0], &[1.0, 3.0]).unwrap());
        fs::write(dir.join("p.json"), serde_json::to_string(&doc).unwrap()).unwrap();
        let d: ModelDescriptor =
            serde_json::from_str(r#"{"function": {"name": "bilinear"}, "polytope": "p.json"}"#).unwrap();
        assert_eq!(d.resolve(Some(&dir)).unwrap().polytope.bounds()[1], [0.0, 3.0]);
        let mut inline = ModelDescriptor::named("bilinear");
        inline.polytope = Some(PolytopeSource::Inline(doc));
        let again: ModelDescriptor = serde_json::from_str(&serde_json::to_string(&inline).unwrap()).unwrap();
        assert_eq!(again, inline);
        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn square_region_records() {
        let recs = region_records(&Polytope::from_box(&[0.0, 0.0], &[1.0, 1.0]).unwrap()).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].a_plus, vec![1.0, 0.0]);
        assert_eq!(recs[1].a_plus, vec![0.0, 1.0]);
        assert!(recs.iter().all(|r| r.a_minus.is_none()));
    }
}
