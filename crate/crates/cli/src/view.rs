//! Read-side operations shared verbatim by the CLI and the HTTP service,
//! so both fronts produce byte-identical output.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use teca_core::asset::{AssetRegistry, SceneDescriptor};
use teca_core::iri::{Iri, Term};
use teca_core::process::WorkflowStage;
use teca_core::store::{BgpQuery, DeltaSide, Store, Timestamp};
use teca_core::vocab::{self, Licence, VocabRegistry};

pub const CRM_P2: &str = "http://www.cidoc-crm.org/cidoc-crm/P2_has_type";
pub const CRM_P55: &str = "http://www.cidoc-crm.org/cidoc-crm/P55_has_current_location";
pub const CRM_P33: &str = "http://www.cidoc-crm.org/cidoc-crm/P33_used_specific_technique";
pub const CRM_P102: &str = "http://www.cidoc-crm.org/cidoc-crm/P102_has_title";
pub const CRM_P50: &str = "http://www.cidoc-crm.org/cidoc-crm/P50_has_current_keeper";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatsGrouping {
    Room,
    Type,
    Technique,
    Stage,
}

impl StatsGrouping {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "room" => Ok(StatsGrouping::Room),
            "type" => Ok(StatsGrouping::Type),
            "technique" => Ok(StatsGrouping::Technique),
            "stage" => Ok(StatsGrouping::Stage),
            other => bail!("unknown grouping {other:?} (expected room, type, technique or stage)"),
        }
    }

    fn key_name(&self) -> &'static str {
        match self {
            StatsGrouping::Room => "room",
            StatsGrouping::Type => "type",
            StatsGrouping::Technique => "technique",
            StatsGrouping::Stage => "stage",
        }
    }
}

fn stats_rows(store: &Store, base: &Iri, grouping: StatsGrouping) -> Vec<(String, usize)> {
    let registry = VocabRegistry::builtin(base);
    let head = store.dataset_head();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    match grouping {
        StatsGrouping::Room => {
            let room_prefix = format!("{}room/", base.as_str());
            for quad in &head {
                if quad.predicate.as_str() == CRM_P55 {
                    if let Some(room) = quad
                        .object
                        .as_iri()
                        .and_then(|o| o.as_str().strip_prefix(&room_prefix))
                    {
                        *counts.entry(room.to_string()).or_default() += 1;
                    }
                }
            }
        }
        StatsGrouping::Type => {
            for quad in &head {
                if quad.predicate.as_str() == CRM_P2 {
                    if let Some(label) = quad
                        .object
                        .as_iri()
                        .and_then(|o| registry.object_types().label_for(o))
                    {
                        *counts.entry(label.to_string()).or_default() += 1;
                    }
                }
            }
        }
        StatsGrouping::Technique => {
            for quad in &head {
                if quad.predicate.as_str() == CRM_P33 {
                    if let Some(label) = quad
                        .object
                        .as_iri()
                        .and_then(|o| registry.technique_label_for(o))
                    {
                        *counts.entry(label.to_string()).or_default() += 1;
                    }
                }
            }
        }
        StatsGrouping::Stage => {
            let process_prefix = format!("{}process/", base.as_str());
            for entity in store.entities() {
                if let Some(rest) = entity.as_str().strip_prefix(&process_prefix) {
                    if let Some(stage) = rest.rsplit('/').next() {
                        if stage.parse::<WorkflowStage>().is_ok() {
                            *counts.entry(stage.to_string()).or_default() += 1;
                        }
                    }
                }
            }
        }
    }
    let mut rows: Vec<(String, usize)> = counts.into_iter().collect();
    match grouping {
        StatsGrouping::Room => rows.sort_by_key(|(k, _)| k.parse::<u64>().unwrap_or(u64::MAX)),
        StatsGrouping::Stage => rows.sort_by_key(|(k, _)| {
            k.parse::<WorkflowStage>()
                .map(|s| s.ordinal())
                .unwrap_or(u8::MAX)
        }),
        _ => {} // already lexicographic
    }
    rows
}

/// Aligned text table (or CSV) of exact per-group counts over the latest
/// dataset version, with a trailing total row. Empty store: empty output.
pub fn stats(store: &Store, base: &Iri, grouping: StatsGrouping, csv: bool) -> String {
    let rows = stats_rows(store, base, grouping);
    if rows.is_empty() {
        return String::new();
    }
    let total: usize = rows.iter().map(|(_, c)| c).sum();
    let key_name = grouping.key_name();
    if csv {
        let mut out = format!("{key_name},count\n");
        for (key, count) in &rows {
            out.push_str(&format!("{key},{count}\n"));
        }
        out.push_str(&format!("total,{total}\n"));
        return out;
    }
    let key_width = rows
        .iter()
        .map(|(k, _)| k.len())
        .chain([key_name.len(), "total".len()])
        .max()
        .unwrap();
    let count_width = rows
        .iter()
        .map(|(_, c)| c.to_string().len())
        .chain(["count".len(), total.to_string().len()])
        .max()
        .unwrap();
    let mut out = format!("{key_name:<key_width$}  {:>count_width$}\n", "count");
    for (key, count) in &rows {
        out.push_str(&format!("{key:<key_width$}  {count:>count_width$}\n"));
    }
    out.push_str(&format!("{:<key_width$}  {total:>count_width$}\n", "total"));
    out
}

/// Which store functionality a query runs against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuerySelector {
    Latest,
    At(Timestamp),
    CrossVersion,
    Delta {
        entity: Iri,
        ordinal: usize,
        side: DeltaSide,
    },
    CrossDelta,
}

fn tsv_line(cells: &[String]) -> String {
    let mut line = cells.join("\t");
    line.push('\n');
    line
}

fn binding_cells(vars: &[String], bindings: &BTreeMap<String, Term>) -> Vec<String> {
    vars.iter()
        .map(|v| bindings.get(v).map(|t| t.to_string()).unwrap_or_default())
        .collect()
}

/// Run a query and format the bindings as TSV: header = variables in order
/// of first appearance (plus selector columns), rows sorted.
pub fn run_query(store: &Store, pattern: &str, selector: &QuerySelector) -> Result<String> {
    let query = BgpQuery::parse(pattern).map_err(|e| anyhow!("{e}"))?;
    let vars = query.variables();
    let mut header: Vec<String> = Vec::new();
    let mut rows: Vec<String> = Vec::new();
    match selector {
        QuerySelector::Latest | QuerySelector::At(_) => {
            header.extend(vars.iter().cloned());
            let bindings_set = match selector {
                QuerySelector::Latest => store.query_head(&query),
                QuerySelector::At(at) => store.query_at(&query, *at),
                _ => unreachable!(),
            };
            for bindings in bindings_set {
                rows.push(tsv_line(&binding_cells(&vars, &bindings)));
            }
        }
        QuerySelector::CrossVersion => {
            header.push("from".to_string());
            header.push("to".to_string());
            header.extend(vars.iter().cloned());
            for hit in store.query_cross_version(&query) {
                let mut cells = vec![
                    hit.from_version.to_string(),
                    hit.to_version
                        .map(|v| v.to_string())
                        .unwrap_or_else(|| "-".to_string()),
                ];
                cells.extend(binding_cells(&vars, &hit.bindings));
                rows.push(tsv_line(&cells));
            }
        }
        QuerySelector::Delta {
            entity,
            ordinal,
            side,
        } => {
            header.extend(vars.iter().cloned());
            let bindings_set = store
                .query_delta(&query, entity, *ordinal, *side)
                .map_err(|e| anyhow!("{e}"))?;
            for bindings in bindings_set {
                rows.push(tsv_line(&binding_cells(&vars, &bindings)));
            }
        }
        QuerySelector::CrossDelta => {
            header.push("snapshot".to_string());
            header.push("side".to_string());
            header.extend(vars.iter().cloned());
            for hit in store.query_cross_delta(&query) {
                let mut cells = vec![hit.snapshot.to_string(), hit.side.to_string()];
                cells.extend(binding_cells(&vars, &hit.bindings));
                rows.push(tsv_line(&cells));
            }
        }
    }
    rows.sort();
    let mut out = tsv_line(&header);
    out.extend(rows);
    Ok(out)
}

#[derive(Debug, Serialize)]
struct AssetView {
    level: u8,
    format: String,
    path: String,
    size_bytes: u64,
}

#[derive(Debug, Serialize)]
struct RecordView {
    id: String,
    title: String,
    #[serde(rename = "type")]
    object_type: String,
    room: Option<u8>,
    creators: Vec<String>,
    holder: String,
    licence: String,
    process_stages: Vec<String>,
    assets: Vec<AssetView>,
    scenes: Vec<String>,
}

fn licence_label(base: &Iri, iri: &Iri) -> String {
    for licence in [Licence::Cc0, Licence::CcBy, Licence::CcByNc, Licence::CcByNcSa] {
        if &licence.iri(base) == iri {
            return licence.label().to_string();
        }
    }
    iri.as_str().to_string()
}

/// One JSON document describing an object: catalogue fields projected from
/// its data graph plus its workflow stages, asset levels and scene ids.
pub fn export_record(
    store: &Store,
    registry: &AssetRegistry,
    base: &Iri,
    id: &str,
) -> Result<String> {
    let entity = vocab::object_iri(base, id);
    let graph = store
        .head_graph(&entity)
        .map_err(|_| anyhow!("unknown id: {id}"))?;
    let vocabs = VocabRegistry::builtin(base);

    let mut title = String::new();
    let mut object_type = String::new();
    let mut room = None;
    let mut creators = Vec::new();
    let mut holder_literal = None;
    let mut holder_iri = None;
    let mut licence = String::new();
    let room_prefix = format!("{}room/", base.as_str());
    let creator_prop = format!("{}prop/creator", base.as_str());
    let creator_ref_prop = format!("{}prop/creator-ref", base.as_str());
    let licence_prop = format!("{}prop/licence", base.as_str());

    for quad in graph {
        let p = quad.predicate.as_str();
        match &quad.object {
            Term::Literal(lit) if p == CRM_P102 => title = lit.lexical().to_string(),
            Term::Iri(o) if p == CRM_P2 => {
                if let Some(label) = vocabs.object_types().label_for(o) {
                    object_type = label.to_string();
                }
            }
            Term::Iri(o) if p == CRM_P55 => {
                room = o
                    .as_str()
                    .strip_prefix(&room_prefix)
                    .and_then(|r| r.parse().ok());
            }
            Term::Literal(lit) if p == creator_prop => creators.push(lit.lexical().to_string()),
            Term::Iri(o) if p == creator_ref_prop => creators.push(o.as_str().to_string()),
            Term::Literal(lit) if p == CRM_P50 => holder_literal = Some(lit.lexical().to_string()),
            Term::Iri(o) if p == CRM_P50 => holder_iri = Some(o.as_str().to_string()),
            Term::Iri(o) if p == licence_prop => licence = licence_label(base, o),
            _ => {}
        }
    }
    creators.sort();

    let mut process_stages: Vec<String> = Vec::new();
    for stage in WorkflowStage::ALL {
        let process_entity = vocab::process_iri(base, id, stage);
        if store.contains(&process_entity) {
            process_stages.push(stage.token().to_string());
        }
    }

    let mut assets: Vec<AssetView> = registry
        .assets_of(id)
        .map(|a| AssetView {
            level: a.level.number(),
            format: a.format.label().to_string(),
            path: a.path.clone(),
            size_bytes: a.size_bytes,
        })
        .collect();
    assets.sort_by_key(|a| a.level);

    let mut scenes: Vec<String> = registry
        .scenes_for_object(id)
        .map(|s| s.scene_id.clone())
        .collect();
    scenes.sort();

    let view = RecordView {
        id: id.to_string(),
        title,
        object_type,
        room,
        creators,
        holder: holder_literal.or(holder_iri).unwrap_or_default(),
        licence,
        process_stages,
        assets,
        scenes,
    };
    Ok(serde_json::to_string_pretty(&view)? + "\n")
}

#[derive(Debug, Serialize)]
struct SceneItemView {
    object_id: String,
    level: u8,
    path: String,
}

#[derive(Debug, Serialize)]
struct SceneView {
    scene_id: String,
    title: String,
    items: Vec<SceneItemView>,
    metadata_link: Option<String>,
}

pub fn scene_json(registry: &AssetRegistry, scene: &SceneDescriptor) -> Result<String> {
    let items = scene
        .items
        .iter()
        .map(|object_id| {
            let asset = registry
                .asset(object_id, teca_core::process::ModelLevel::Level2)
                .context("scene items always have a level-2 asset")?;
            Ok(SceneItemView {
                object_id: object_id.clone(),
                level: 2,
                path: asset.path.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let view = SceneView {
        scene_id: scene.scene_id.clone(),
        title: scene.title.clone(),
        items,
        metadata_link: scene.metadata_link.as_ref().map(|i| i.as_str().to_string()),
    };
    Ok(serde_json::to_string_pretty(&view)? + "\n")
}

pub fn export_scene(registry: &AssetRegistry, scene_id: &str) -> Result<String> {
    let scene = registry
        .scene(scene_id)
        .ok_or_else(|| anyhow!("unknown id: {scene_id}"))?;
    scene_json(registry, scene)
}

/// Resolve a CLI-supplied entity: either a full IRI or a catalogue id.
pub fn resolve_entity(base: &Iri, id_or_iri: &str) -> Iri {
    match Iri::new(id_or_iri) {
        Ok(iri) => iri,
        Err(_) => vocab::object_iri(base, id_or_iri),
    }
}

pub fn export_prov(store: &Store, base: &Iri, id_or_iri: &str) -> Result<String> {
    let entity = resolve_entity(base, id_or_iri);
    store
        .serialize_prov(&entity)
        .map_err(|_| anyhow!("unknown id: {id_or_iri}"))
}

/// One line per snapshot: ordinal, validity window, agent, delta size and
/// description.
pub fn snapshot_log(store: &Store, base: &Iri, id_or_iri: &str) -> Result<String> {
    let entity = resolve_entity(base, id_or_iri);
    let snapshots = store
        .snapshots(&entity)
        .map_err(|_| anyhow!("unknown id: {id_or_iri}"))?;
    let mut out = String::new();
    for snapshot in snapshots {
        out.push_str(&format!(
            "se/{}  {}/{}  agent {}  +{} -{}  {}\n",
            snapshot.ordinal(),
            snapshot.valid_from,
            snapshot
                .valid_to
                .map(|t| t.to_string())
                .unwrap_or_else(|| "-".to_string()),
            snapshot.agent,
            snapshot.delta.insertions().len(),
            snapshot.delta.deletions().len(),
            snapshot.description,
        ));
    }
    Ok(out)
}
