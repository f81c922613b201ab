//! Registry of digital assets (levels 0/1/2 per object) and published
//! scenes, plus container-level validation of binary glTF files.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::iri::Iri;
use crate::process::ModelLevel;
use crate::report::Report;
use crate::vocab::Licence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AssetFormat {
    Gltf,
    Glb,
    ObjMtlTexture,
    E57,
    Tiff,
    Png,
    Jpg,
    Mp4,
    Mp3,
}

impl AssetFormat {
    pub fn label(&self) -> &'static str {
        match self {
            AssetFormat::Gltf => "glTF",
            AssetFormat::Glb => "GLB",
            AssetFormat::ObjMtlTexture => "OBJ+MTL+texture",
            AssetFormat::E57 => "E57",
            AssetFormat::Tiff => "TIFF",
            AssetFormat::Png => "PNG",
            AssetFormat::Jpg => "JPG",
            AssetFormat::Mp4 => "MP4",
            AssetFormat::Mp3 => "MP3",
        }
    }

    pub const ALL: [AssetFormat; 9] = [
        AssetFormat::Gltf,
        AssetFormat::Glb,
        AssetFormat::ObjMtlTexture,
        AssetFormat::E57,
        AssetFormat::Tiff,
        AssetFormat::Png,
        AssetFormat::Jpg,
        AssetFormat::Mp4,
        AssetFormat::Mp3,
    ];

    /// Web-delivery formats allowed for level-2 assets.
    pub fn is_web_delivery(&self) -> bool {
        matches!(self, AssetFormat::Gltf | AssetFormat::Glb)
    }
}

impl fmt::Display for AssetFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown asset format {0:?}")]
pub struct UnknownFormat(pub String);

impl FromStr for AssetFormat {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AssetFormat::ALL
            .into_iter()
            .find(|f| f.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownFormat(s.to_string()))
    }
}

/// How a region of a model was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ParadataMethod {
    Photogrammetry,
    Sls,
    CgModelling,
    Reuse,
}

impl ParadataMethod {
    pub fn label(&self) -> &'static str {
        match self {
            ParadataMethod::Photogrammetry => "photogrammetry",
            ParadataMethod::Sls => "SLS",
            ParadataMethod::CgModelling => "CG modelling",
            ParadataMethod::Reuse => "reuse",
        }
    }
}

impl fmt::Display for ParadataMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown paradata method {0:?}")]
pub struct UnknownMethod(pub String);

impl FromStr for ParadataMethod {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "photogrammetry" => Ok(ParadataMethod::Photogrammetry),
            "SLS" => Ok(ParadataMethod::Sls),
            "CG modelling" => Ok(ParadataMethod::CgModelling),
            "reuse" => Ok(ParadataMethod::Reuse),
            other => Err(UnknownMethod(other.to_string())),
        }
    }
}

/// Per-region production method, the semantic layer distinguishing
/// photogrammetric from CG-modelled parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParadataEntry {
    pub region: String,
    pub method: ParadataMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssetRecord {
    pub object_id: String,
    pub level: ModelLevel,
    pub format: AssetFormat,
    pub path: String,
    pub size_bytes: u64,
    pub texture_max_px: Option<u32>,
    pub licence: Licence,
    pub paradata: Vec<ParadataEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneDescriptor {
    pub scene_id: String,
    pub title: String,
    /// Object ids whose level-2 assets the scene references.
    pub items: Vec<String>,
    pub metadata_link: Option<Iri>,
}

#[derive(Debug, Error, PartialEq)]
pub enum AssetError {
    #[error("duplicate level {} for {object_id}", level.number())]
    DuplicateAsset {
        object_id: String,
        level: ModelLevel,
    },
    #[error("level 2 must be glTF/GLB, got {0}")]
    NonWebLevel2(AssetFormat),
    #[error("size_bytes must be positive")]
    ZeroSize,
    #[error("texture_max_px {0} exceeds the 16384 delivery ceiling")]
    TextureTooLarge(u32),
    #[error("unknown asset: no level {} for {object_id}", level.number())]
    UnknownAsset {
        object_id: String,
        level: ModelLevel,
    },
    #[error("duplicate paradata pair ({region:?}, {method}) on {object_id}")]
    DuplicateParadata {
        object_id: String,
        region: String,
        method: ParadataMethod,
    },
    #[error("a scene needs at least one item")]
    EmptyScene,
    #[error("scene item {object_id:?} has no registered level-2 asset")]
    MissingLevel2 { object_id: String },
}

/// Append-only catalogue of assets and scenes. Assets are referenced by
/// path and size; the registry is a catalogue, not an object store.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct AssetRegistry {
    assets: Vec<AssetRecord>,
    scenes: Vec<SceneDescriptor>,
}

impl AssetRegistry {
    pub fn new() -> Self {
        AssetRegistry::default()
    }

    pub fn assets(&self) -> &[AssetRecord] {
        &self.assets
    }

    pub fn scenes(&self) -> &[SceneDescriptor] {
        &self.scenes
    }

    pub fn asset(&self, object_id: &str, level: ModelLevel) -> Option<&AssetRecord> {
        self.assets
            .iter()
            .find(|a| a.object_id == object_id && a.level == level)
    }

    pub fn assets_of<'a>(&'a self, object_id: &'a str) -> impl Iterator<Item = &'a AssetRecord> + 'a {
        self.assets.iter().filter(move |a| a.object_id == object_id)
    }

    pub fn scene(&self, scene_id: &str) -> Option<&SceneDescriptor> {
        self.scenes.iter().find(|s| s.scene_id == scene_id)
    }

    pub fn scenes_for_object<'a>(&'a self, object_id: &'a str) -> impl Iterator<Item = &'a SceneDescriptor> + 'a {
        self.scenes
            .iter()
            .filter(move |s| s.items.iter().any(|i| i == object_id))
    }

    pub fn register_asset(&mut self, record: AssetRecord) -> Result<(), AssetError> {
        if self.asset(&record.object_id, record.level).is_some() {
            return Err(AssetError::DuplicateAsset {
                object_id: record.object_id,
                level: record.level,
            });
        }
        if record.level == ModelLevel::Level2 && !record.format.is_web_delivery() {
            return Err(AssetError::NonWebLevel2(record.format));
        }
        if record.size_bytes == 0 {
            return Err(AssetError::ZeroSize);
        }
        if let Some(px) = record.texture_max_px {
            if px > 16384 {
                return Err(AssetError::TextureTooLarge(px));
            }
        }
        self.assets.push(record);
        Ok(())
    }

    pub fn attach_paradata(
        &mut self,
        object_id: &str,
        level: ModelLevel,
        region: &str,
        method: ParadataMethod,
    ) -> Result<(), AssetError> {
        let asset = self
            .assets
            .iter_mut()
            .find(|a| a.object_id == object_id && a.level == level)
            .ok_or_else(|| AssetError::UnknownAsset {
                object_id: object_id.to_string(),
                level,
            })?;
        if asset
            .paradata
            .iter()
            .any(|p| p.region == region && p.method == method)
        {
            return Err(AssetError::DuplicateParadata {
                object_id: object_id.to_string(),
                region: region.to_string(),
                method,
            });
        }
        asset.paradata.push(ParadataEntry {
            region: region.to_string(),
            method,
        });
        Ok(())
    }

    fn fresh_scene_id(&self, seed: Option<u64>) -> String {
        const ALPHABET: &[u8] = b"abcdefghijklmnopqrstuvwxyz0123456789";
        let mut rng: Box<dyn rand::RngCore> = match seed {
            Some(seed) => Box::new(ChaCha8Rng::seed_from_u64(seed)),
            None => Box::new(rand::rng()),
        };
        loop {
            let id: String = (0..16)
                .map(|_| ALPHABET[rng.random_range(0..ALPHABET.len())] as char)
                .collect();
            if self.scene(&id).is_none() {
                return id;
            }
            // collision: keep drawing from the same stream
        }
    }

    /// Publish a scene over registered level-2 assets. The scene id is 16
    /// characters over [a-z0-9]; with a seed the generation is
    /// deterministic, and collisions are resolved by drawing again.
    pub fn create_scene(
        &mut self,
        items: &[String],
        title: &str,
        metadata_link: Option<Iri>,
        seed: Option<u64>,
    ) -> Result<&SceneDescriptor, AssetError> {
        if items.is_empty() {
            return Err(AssetError::EmptyScene);
        }
        for object_id in items {
            if self.asset(object_id, ModelLevel::Level2).is_none() {
                return Err(AssetError::MissingLevel2 {
                    object_id: object_id.clone(),
                });
            }
        }
        let scene_id = self.fresh_scene_id(seed);
        self.scenes.push(SceneDescriptor {
            scene_id,
            title: title.to_string(),
            items: items.to_vec(),
            metadata_link,
        });
        Ok(self.scenes.last().unwrap())
    }
}

const GLB_MAGIC: u32 = 0x46546C67; // ASCII "glTF", little-endian
const CHUNK_JSON: u32 = 0x4E4F534A; // ASCII "JSON", little-endian

fn u32_le(bytes: &[u8], offset: usize) -> u32 {
    u32::from_le_bytes(bytes[offset..offset + 4].try_into().unwrap())
}

/// Container-level validation of a binary glTF file: the 12-byte header
/// (magic, version 2, declared total length) and the type of the first
/// chunk, which must be the structured JSON content.
pub fn validate_glb_header(bytes: &[u8]) -> Report {
    let mut report = Report::new();
    if bytes.is_empty() {
        report.note("empty file (0 bytes)");
        return report;
    }
    if bytes.len() < 12 {
        report.note(format!("truncated header: {} bytes, need 12", bytes.len()));
        return report;
    }
    if &bytes[0..4] != b"glTF" {
        debug_assert_eq!(u32::from_le_bytes(*b"glTF"), GLB_MAGIC);
        report.note(format!(
            "bad magic: expected \"glTF\", found {:?}",
            String::from_utf8_lossy(&bytes[0..4])
        ));
    }
    let version = u32_le(bytes, 4);
    if version != 2 {
        report.note(format!("unsupported container version {version} (expected 2)"));
    }
    let declared = u32_le(bytes, 8) as usize;
    if declared != bytes.len() {
        report.note(format!(
            "length mismatch: header declares {declared} bytes, file has {}",
            bytes.len()
        ));
    }
    if bytes.len() < 20 {
        report.note("missing first chunk header");
        return report;
    }
    let chunk_type = u32_le(bytes, 16);
    if chunk_type != CHUNK_JSON {
        report.note(format!(
            "first chunk must be JSON structured content, found {:?}",
            String::from_utf8_lossy(&bytes[16..20])
        ));
    }
    report
}
