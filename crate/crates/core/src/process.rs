//! The seven-stage digitisation workflow and its tracked per-object metadata.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::Report;
use crate::vocab::TECHNIQUE_LABELS;

/// Workflow stages in execution order: one acquisition step followed by six
/// software activities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WorkflowStage {
    Acquisition,
    Processing,
    Modelling,
    Optimisation,
    Export,
    MetadataCreation,
    Upload,
}

impl WorkflowStage {
    pub const ALL: [WorkflowStage; 7] = [
        WorkflowStage::Acquisition,
        WorkflowStage::Processing,
        WorkflowStage::Modelling,
        WorkflowStage::Optimisation,
        WorkflowStage::Export,
        WorkflowStage::MetadataCreation,
        WorkflowStage::Upload,
    ];

    pub fn ordinal(&self) -> u8 {
        match self {
            WorkflowStage::Acquisition => 1,
            WorkflowStage::Processing => 2,
            WorkflowStage::Modelling => 3,
            WorkflowStage::Optimisation => 4,
            WorkflowStage::Export => 5,
            WorkflowStage::MetadataCreation => 6,
            WorkflowStage::Upload => 7,
        }
    }

    /// Token used in CSV cells and minted IRIs.
    pub fn token(&self) -> &'static str {
        match self {
            WorkflowStage::Acquisition => "acquisition",
            WorkflowStage::Processing => "processing",
            WorkflowStage::Modelling => "modelling",
            WorkflowStage::Optimisation => "optimisation",
            WorkflowStage::Export => "export",
            WorkflowStage::MetadataCreation => "metadata-creation",
            WorkflowStage::Upload => "upload",
        }
    }
}

impl fmt::Display for WorkflowStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown workflow stage {0:?}")]
pub struct UnknownStage(pub String);

impl FromStr for WorkflowStage {
    type Err = UnknownStage;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WorkflowStage::ALL
            .into_iter()
            .find(|stage| stage.token() == s.trim())
            .ok_or_else(|| UnknownStage(s.to_string()))
    }
}

/// Storage levels per digitised item: raw capture, complete high-resolution
/// mesh, and the web-optimised mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModelLevel {
    Level0,
    Level1,
    Level2,
}

impl ModelLevel {
    pub const ALL: [ModelLevel; 3] = [ModelLevel::Level0, ModelLevel::Level1, ModelLevel::Level2];

    pub fn number(&self) -> u8 {
        match self {
            ModelLevel::Level0 => 0,
            ModelLevel::Level1 => 1,
            ModelLevel::Level2 => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<ModelLevel> {
        ModelLevel::ALL.into_iter().find(|l| l.number() == n)
    }
}

impl fmt::Display for ModelLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level {}", self.number())
    }
}

/// Closed calendar-date interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DateInterval {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DateInterval {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Self {
        DateInterval { start, end }
    }
}

/// One tracked activity: who did what, with which tools, when.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: WorkflowStage,
    pub institution: String,
    pub people: Vec<String>,
    pub technique: Option<String>,
    pub tools: Vec<String>,
    pub dates: DateInterval,
}

impl StageRecord {
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let at = self.stage.token();
        if self.institution.trim().is_empty() {
            report.note_at(at, "institution must be non-empty");
        }
        if self.people.is_empty() || self.people.iter().all(|p| p.trim().is_empty()) {
            report.note_at(at, "people must be non-empty");
        }
        if self.dates.start > self.dates.end {
            report.note_at(at, "dates.start must not exceed dates.end");
        }
        match &self.technique {
            Some(technique) => {
                if !TECHNIQUE_LABELS.contains(&technique.trim()) {
                    report.note_at(at, format!("unknown technique {technique:?}"));
                }
            }
            None => {
                if self.stage == WorkflowStage::Acquisition {
                    report.note_at(at, "acquisition requires a technique");
                }
            }
        }
        report
    }
}

/// Per-object chain of workflow stages, at most one record per stage.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessRecord {
    pub object_id: String,
    pub stages: BTreeMap<WorkflowStage, StageRecord>,
}

impl ProcessRecord {
    pub fn new(object_id: impl Into<String>) -> Self {
        ProcessRecord {
            object_id: object_id.into(),
            stages: BTreeMap::new(),
        }
    }

    pub fn stage(&self, stage: WorkflowStage) -> Option<&StageRecord> {
        self.stages.get(&stage)
    }

    /// Technique governing the whole chain: the acquisition technique when
    /// present, otherwise the earliest recorded stage's technique.
    pub fn technique_of_record(&self) -> Option<&str> {
        self.stages
            .get(&WorkflowStage::Acquisition)
            .and_then(|sr| sr.technique.as_deref())
            .or_else(|| self.stages.values().find_map(|sr| sr.technique.as_deref()))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProcessError {
    #[error("duplicate stage {} ({stage})", stage.ordinal())]
    DuplicateStage { stage: WorkflowStage },
    #[error("invalid stage record: {0}")]
    InvalidStage(Report),
}

/// Add a stage record, returning a new process record (value semantics:
/// the input is left untouched).
pub fn record_stage(proc: &ProcessRecord, record: StageRecord) -> Result<ProcessRecord, ProcessError> {
    if proc.stages.contains_key(&record.stage) {
        return Err(ProcessError::DuplicateStage { stage: record.stage });
    }
    let report = record.validate();
    if !report.ok() {
        return Err(ProcessError::InvalidStage(report));
    }
    let mut next = proc.clone();
    next.stages.insert(record.stage, record);
    Ok(next)
}

/// Check chain-level rules: stage-record invariants, weak start-date
/// monotonicity, upload-needs-export, and acquisition presence unless the
/// model was reused.
pub fn validate_process(proc: &ProcessRecord) -> Report {
    let mut report = Report::new();
    for record in proc.stages.values() {
        report.merge(record.validate());
    }

    let mut prev: Option<(&StageRecord, WorkflowStage)> = None;
    for (stage, record) in &proc.stages {
        if let Some((prev_record, prev_stage)) = prev {
            if record.dates.start < prev_record.dates.start {
                report.note_at(
                    stage.token(),
                    format!(
                        "start date {} precedes start of earlier stage {}",
                        record.dates.start,
                        prev_stage.token()
                    ),
                );
            }
        }
        prev = Some((record, *stage));
    }

    if proc.stages.contains_key(&WorkflowStage::Upload)
        && !proc.stages.contains_key(&WorkflowStage::Export)
    {
        report.note("Upload without Export");
    }

    let has_software_stage = proc
        .stages
        .keys()
        .any(|stage| *stage != WorkflowStage::Acquisition);
    let reused = proc.technique_of_record() == Some("reuse of existing model");
    if has_software_stage && !proc.stages.contains_key(&WorkflowStage::Acquisition) && !reused {
        report.note("missing Acquisition");
    }

    report
}

/// Aggregate view over a set of process records.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WorkflowSummary {
    pub stage_counts: BTreeMap<WorkflowStage, usize>,
    pub technique_counts: BTreeMap<String, usize>,
    pub date_span: Option<(NaiveDate, NaiveDate)>,
}

impl WorkflowSummary {
    pub fn total_stage_count(&self) -> usize {
        self.stage_counts.values().sum()
    }
}

pub fn summarize_workflow(dataset: &[ProcessRecord]) -> WorkflowSummary {
    let mut summary = WorkflowSummary::default();
    for proc in dataset {
        for (stage, record) in &proc.stages {
            *summary.stage_counts.entry(*stage).or_default() += 1;
            if let Some(technique) = &record.technique {
                *summary
                    .technique_counts
                    .entry(technique.trim().to_string())
                    .or_default() += 1;
            }
            summary.date_span = match summary.date_span {
                None => Some((record.dates.start, record.dates.end)),
                Some((lo, hi)) => {
                    Some((lo.min(record.dates.start), hi.max(record.dates.end)))
                }
            };
        }
    }
    summary
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquipmentKind {
    Scanner,
    Camera,
}

/// Technical specification sheet for an acquisition device.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquipmentSpec {
    pub name: String,
    pub kind: EquipmentKind,
    pub attributes: IndexMap<String, (f64, String)>,
}

impl EquipmentSpec {
    pub fn new(
        name: impl Into<String>,
        kind: EquipmentKind,
        attributes: impl IntoIterator<Item = (&'static str, f64, &'static str)>,
    ) -> Self {
        let mut map = IndexMap::new();
        for (metric, value, unit) in attributes {
            assert!(value > 0.0, "equipment attribute {metric} must be positive");
            map.insert(metric.to_string(), (value, unit.to_string()));
        }
        EquipmentSpec {
            name: name.into(),
            kind,
            attributes: map,
        }
    }
}

/// The structured-light scanners and photogrammetry cameras used on site.
pub fn builtin_equipment() -> Vec<EquipmentSpec> {
    vec![
        EquipmentSpec::new(
            "Artec Space Spider",
            EquipmentKind::Scanner,
            [
                ("3D point precision", 0.05, "mm"),
                ("3D resolution", 0.1, "mm"),
                ("texture resolution", 1.3, "MP"),
                ("acquisition distance min", 20.0, "cm"),
                ("acquisition distance max", 30.0, "cm"),
            ],
        ),
        EquipmentSpec::new(
            "Artec Eva",
            EquipmentKind::Scanner,
            [
                ("3D point precision", 0.1, "mm"),
                ("3D resolution", 0.2, "mm"),
                ("texture resolution", 1.3, "MP"),
                ("acquisition distance min", 40.0, "cm"),
                ("acquisition distance max", 100.0, "cm"),
            ],
        ),
        EquipmentSpec::new(
            "Panasonic DMC-LX100",
            EquipmentKind::Camera,
            [
                ("sensor width", 17.3, "mm"),
                ("sensor height", 13.0, "mm"),
                ("image width", 4112.0, "px"),
                ("image height", 3088.0, "px"),
                ("pixel size", 4.19, "µm"),
                ("focal length min", 24.0, "mm"),
                ("focal length max", 75.0, "mm"),
            ],
        ),
        EquipmentSpec::new(
            "Nikon D7200",
            EquipmentKind::Camera,
            [
                ("sensor width", 23.5, "mm"),
                ("sensor height", 15.6, "mm"),
                ("image width", 6000.0, "px"),
                ("image height", 4000.0, "px"),
                ("pixel size", 3.89, "µm"),
                ("focal length", 50.0, "mm"),
            ],
        ),
        EquipmentSpec::new(
            "Canon EOS 6D",
            EquipmentKind::Camera,
            [
                ("sensor width", 36.0, "mm"),
                ("sensor height", 24.0, "mm"),
                ("image width", 5472.0, "px"),
                ("image height", 3648.0, "px"),
                ("pixel size", 6.54, "µm"),
                ("focal length", 50.0, "mm"),
            ],
        ),
        EquipmentSpec::new(
            "Nikon D750",
            EquipmentKind::Camera,
            [
                ("sensor width", 36.0, "mm"),
                ("sensor height", 24.0, "mm"),
                ("image width", 6016.0, "px"),
                ("image height", 4016.0, "px"),
                ("pixel size", 5.95, "µm"),
                ("focal length min", 40.0, "mm"),
                ("focal length max", 70.0, "mm"),
            ],
        ),
        EquipmentSpec::new(
            "Sony A7 I",
            EquipmentKind::Camera,
            [
                ("sensor width", 36.0, "mm"),
                ("sensor height", 24.0, "mm"),
                ("image width", 6000.0, "px"),
                ("image height", 4000.0, "px"),
                ("pixel size", 5.93, "µm"),
                ("focal length min", 28.0, "mm"),
                ("focal length max", 70.0, "mm"),
            ],
        ),
    ]
}

pub fn known_equipment(name: &str) -> Option<EquipmentSpec> {
    builtin_equipment().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn date(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    fn stage_record(stage: WorkflowStage, start: &str, end: &str) -> StageRecord {
        StageRecord {
            stage,
            institution: "DBC".to_string(),
            people: vec!["A. Rossi".to_string()],
            technique: (stage == WorkflowStage::Acquisition).then(|| "SLS".to_string()),
            tools: vec!["Artec Space Spider".to_string()],
            dates: DateInterval::new(date(start), date(end)),
        }
    }

    #[test]
    fn record_stage_inserts_without_mutating_input() {
        let proc = ProcessRecord::new("obj1");
        let p1 = record_stage(&proc, stage_record(WorkflowStage::Acquisition, "2023-03-27", "2023-03-27")).unwrap();
        assert!(proc.stages.is_empty());
        let p2 = record_stage(&p1, stage_record(WorkflowStage::Processing, "2023-04-01", "2023-04-02")).unwrap();
        assert_eq!(p2.stages.len(), 2);
        assert_eq!(p1.stages.len(), 1);
    }

    #[test]
    fn duplicate_stage_is_rejected_naming_the_stage() {
        let proc = record_stage(
            &ProcessRecord::new("obj1"),
            stage_record(WorkflowStage::Acquisition, "2023-03-27", "2023-03-27"),
        )
        .unwrap();
        let err = record_stage(
            &proc,
            stage_record(WorkflowStage::Acquisition, "2023-03-28", "2023-03-28"),
        )
        .unwrap_err();
        assert_eq!(err.to_string(), "duplicate stage 1 (acquisition)");
    }

    #[test]
    fn equipment_cross_reference() {
        let sr = stage_record(WorkflowStage::Acquisition, "2023-03-27", "2023-03-27");
        assert!(sr.validate().ok());
        let spider = known_equipment(&sr.tools[0]).expect("tool is a known device");
        assert_eq!(spider.attributes["3D point precision"], (0.05, "mm".to_string()));
    }

    #[test]
    fn complete_chain_with_monotone_dates_is_ok() {
        let mut proc = ProcessRecord::new("obj1");
        for (i, stage) in WorkflowStage::ALL.into_iter().enumerate() {
            let start = date("2023-03-27") + chrono::Days::new(i as u64 * 7);
            let end = start + chrono::Days::new(3);
            proc = record_stage(
                &proc,
                StageRecord {
                    dates: DateInterval::new(start, end),
                    ..stage_record(stage, "2023-03-27", "2023-03-27")
                },
            )
            .unwrap();
        }
        assert!(validate_process(&proc).ok());
    }

    #[test]
    fn upload_alone_breaks_two_rules() {
        let proc = record_stage(
            &ProcessRecord::new("obj1"),
            stage_record(WorkflowStage::Upload, "2023-07-01", "2023-07-01"),
        )
        .unwrap();
        let report = validate_process(&proc);
        assert!(report.contains("Upload without Export"));
        assert!(report.contains("missing Acquisition"));
    }

    #[test]
    fn reused_model_does_not_need_acquisition() {
        let mut sr = stage_record(WorkflowStage::Processing, "2023-04-01", "2023-04-02");
        sr.technique = Some("reuse of existing model".to_string());
        let proc = record_stage(&ProcessRecord::new("obj1"), sr).unwrap();
        assert!(validate_process(&proc).ok());
    }

    #[test]
    fn removing_an_unrelated_stage_does_not_fix_a_violation() {
        let mut proc = record_stage(
            &ProcessRecord::new("obj1"),
            stage_record(WorkflowStage::Acquisition, "2023-03-27", "2023-03-27"),
        )
        .unwrap();
        proc = record_stage(&proc, stage_record(WorkflowStage::Upload, "2023-07-01", "2023-07-01")).unwrap();
        assert!(validate_process(&proc).contains("Upload without Export"));
        proc.stages.remove(&WorkflowStage::Acquisition);
        assert!(validate_process(&proc).contains("Upload without Export"));
    }

    #[test]
    fn non_monotone_start_dates_are_flagged() {
        let mut proc = record_stage(
            &ProcessRecord::new("obj1"),
            stage_record(WorkflowStage::Acquisition, "2023-05-01", "2023-05-02"),
        )
        .unwrap();
        proc = record_stage(&proc, stage_record(WorkflowStage::Processing, "2023-04-01", "2023-06-01")).unwrap();
        assert!(validate_process(&proc).contains("precedes start of earlier stage"));
    }

    #[test]
    fn empty_dataset_summarizes_to_zeros() {
        let summary = summarize_workflow(&[]);
        assert_eq!(summary.total_stage_count(), 0);
        assert!(summary.technique_counts.is_empty());
        assert!(summary.date_span.is_none());
    }

    #[test]
    fn technique_counting() {
        let records: Vec<ProcessRecord> = (0..3)
            .map(|i| {
                record_stage(
                    &ProcessRecord::new(format!("obj{i}")),
                    stage_record(WorkflowStage::Acquisition, "2023-03-27", "2023-06-26"),
                )
                .unwrap()
            })
            .collect();
        let summary = summarize_workflow(&records);
        assert_eq!(summary.technique_counts["SLS"], 3);
        assert_eq!(
            summary.date_span,
            Some((date("2023-03-27"), date("2023-06-26")))
        );
    }

    proptest! {
        #[test]
        fn insertion_order_does_not_matter(order in Just(WorkflowStage::ALL).prop_shuffle()) {
            let records: Vec<StageRecord> = WorkflowStage::ALL
                .into_iter()
                .map(|s| stage_record(s, "2023-03-27", "2023-06-26"))
                .collect();
            let mut in_order = ProcessRecord::new("obj1");
            for r in &records {
                in_order = record_stage(&in_order, r.clone()).unwrap();
            }
            let mut shuffled = ProcessRecord::new("obj1");
            for stage in order {
                let r = records.iter().find(|r| r.stage == stage).unwrap();
                shuffled = record_stage(&shuffled, r.clone()).unwrap();
            }
            prop_assert_eq!(in_order, shuffled);
        }

        #[test]
        fn summary_conserves_stage_counts(sizes in proptest::collection::vec(0usize..7, 0..12)) {
            let records: Vec<ProcessRecord> = sizes
                .iter()
                .enumerate()
                .map(|(i, n)| {
                    let mut proc = ProcessRecord::new(format!("obj{i}"));
                    for stage in WorkflowStage::ALL.into_iter().take(*n) {
                        proc = record_stage(&proc, stage_record(stage, "2023-03-27", "2023-06-26")).unwrap();
                    }
                    proc
                })
                .collect();
            let summary = summarize_workflow(&records);
            let expected: usize = records.iter().map(|p| p.stages.len()).sum();
            prop_assert_eq!(summary.total_stage_count(), expected);
        }
    }
}
