//! Weight-of-evidence categorization: from (human evidence, animal
//! evidence) study levels to an overall carcinogenicity category.
//!
//! The decision table is isolated in [`DECISION_TABLE`] so a corrected
//! table is a one-place change.

use serde::{Deserialize, Serialize};

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum StudyEvidence {
    Sufficient,
    Limited,
    Inadequate,
    NoData,
    NoEvidence,
}

impl StudyEvidence {
    pub const ALL: [StudyEvidence; 5] = [
        StudyEvidence::Sufficient,
        StudyEvidence::Limited,
        StudyEvidence::Inadequate,
        StudyEvidence::NoData,
        StudyEvidence::NoEvidence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StudyEvidence::Sufficient => "sufficient",
            StudyEvidence::Limited => "limited",
            StudyEvidence::Inadequate => "inadequate",
            StudyEvidence::NoData => "no_data",
            StudyEvidence::NoEvidence => "no_evidence",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|l| l.name() == name)
    }
}

/// Overall category, ordered from weakest to strongest carcinogenicity
/// signal.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum OverallCategory {
    NonCarcinogenic,
    NotClassifiable,
    Possible,
    ProbableCarcinogen,
    Known,
}

impl OverallCategory {
    pub fn name(self) -> &'static str {
        match self {
            OverallCategory::Known => "known_human_carcinogen",
            OverallCategory::ProbableCarcinogen => "probable_human_carcinogen",
            OverallCategory::Possible => "possible",
            OverallCategory::NotClassifiable => "not_classifiable",
            OverallCategory::NonCarcinogenic => "non_carcinogenic",
        }
    }
}

/// One row: which human/animal levels it accepts and the category it
/// yields. An empty level list accepts any level.
pub struct Row {
    pub human: &'static [StudyEvidence],
    pub animal: &'static [StudyEvidence],
    pub category: OverallCategory,
}

use StudyEvidence::*;

const NOT_SUFFICIENT: &[StudyEvidence] = &[Limited, Inadequate, NoData, NoEvidence];

/// Rows are checked in order; anything falling through is not
/// classifiable.
pub const DECISION_TABLE: &[Row] = &[
    Row { human: &[Sufficient], animal: &[], category: OverallCategory::Known },
    Row {
        human: &[Limited],
        animal: &[Sufficient],
        category: OverallCategory::ProbableCarcinogen,
    },
    Row {
        human: &[Inadequate, NoData],
        animal: &[Sufficient],
        category: OverallCategory::Possible,
    },
    Row {
        human: &[Limited],
        animal: NOT_SUFFICIENT,
        category: OverallCategory::Possible,
    },
    Row {
        human: &[NoEvidence],
        animal: &[NoEvidence],
        category: OverallCategory::NonCarcinogenic,
    },
];

fn accepts(levels: &[StudyEvidence], level: StudyEvidence) -> bool {
    levels.is_empty() || levels.contains(&level)
}

/// Total categorization of a (human, animal) evidence pair.
pub fn classify_woe(human: StudyEvidence, animal: StudyEvidence) -> OverallCategory {
    for row in DECISION_TABLE {
        if accepts(row.human, human) && accepts(row.animal, animal) {
            return row.category;
        }
    }
    OverallCategory::NotClassifiable
}
