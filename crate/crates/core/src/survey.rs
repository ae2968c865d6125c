//! Seven-item psychological-safety survey scoring and selection of the
//! consistently-low and consistently-high teams.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::num::{mean, population_stddev, Scalar};

pub const ITEM_COUNT: usize = 7;
pub const SCALE_MIN: u8 = 1;
pub const SCALE_MAX: u8 = 7;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SurveyError {
    #[error("no responses")]
    NoResponses,
    #[error("responses mix groups: expected team `{expected_team}` period {expected_period}, found team `{team}` period {period}")]
    MixedGroup { expected_team: String, expected_period: u32, team: String, period: u32 },
    #[error("respondent `{respondent}`: item q{item} = {value} is outside 1..=7")]
    ItemOutOfRange { respondent: String, item: usize, value: u8 },
    #[error("respondent `{respondent}`: period must be >= 1")]
    BadPeriod { respondent: String },
    #[error("reverse-coded item {0} is outside 1..=7")]
    BadReverseItem(u8),
    #[error("need scores for at least 2 teams, got {0}")]
    TooFewTeams(usize),
    #[error("team `{team}` has more than one score for period {period}")]
    DuplicateScore { team: String, period: u32 },
    #[error("missing period scores: {}", format_gaps(.0))]
    MissingPeriods(Vec<(String, u32)>),
    #[error("no team qualifies as the high team")]
    NoHighCandidate,
    #[error("survey CSV: {0}")]
    Csv(String),
}

fn format_gaps(gaps: &[(String, u32)]) -> String {
    gaps.iter().map(|(t, p)| format!("{t}/period {p}")).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyResponse {
    pub team_id: String,
    pub period: u32,
    pub respondent: String,
    pub items: [u8; ITEM_COUNT],
}

impl SurveyResponse {
    pub fn new(
        team_id: impl Into<String>,
        period: u32,
        respondent: impl Into<String>,
        items: [u8; ITEM_COUNT],
    ) -> Result<Self, SurveyError> {
        let r = SurveyResponse { team_id: team_id.into(), period, respondent: respondent.into(), items };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<(), SurveyError> {
        if self.period == 0 {
            return Err(SurveyError::BadPeriod { respondent: self.respondent.clone() });
        }
        for (i, &v) in self.items.iter().enumerate() {
            if !(SCALE_MIN..=SCALE_MAX).contains(&v) {
                return Err(SurveyError::ItemOutOfRange { respondent: self.respondent.clone(), item: i + 1, value: v });
            }
        }
        Ok(())
    }
}

/// 1-based indices of negatively worded items, scored as `8 − v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReverseItems(BTreeSet<u8>);

impl ReverseItems {
    pub fn new(items: impl IntoIterator<Item = u8>) -> Result<Self, SurveyError> {
        let set: BTreeSet<u8> = items.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&i| i == 0 || i as usize > ITEM_COUNT) {
            return Err(SurveyError::BadReverseItem(bad));
        }
        Ok(ReverseItems(set))
    }

    pub fn none() -> Self {
        ReverseItems(BTreeSet::new())
    }

    pub fn contains(&self, item: u8) -> bool {
        self.0.contains(&item)
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }
}

impl Default for ReverseItems {
    /// Items 1, 3 and 5.
    fn default() -> Self {
        ReverseItems([1, 3, 5].into())
    }
}

/// Reverse the listed items of a response.
pub fn apply_reversal(items: [u8; ITEM_COUNT], reverse: &ReverseItems) -> [u8; ITEM_COUNT] {
    let mut out = items;
    for (i, v) in out.iter_mut().enumerate() {
        if reverse.contains(i as u8 + 1) {
            *v = SCALE_MIN + SCALE_MAX - *v;
        }
    }
    out
}

/// One respondent's score: the mean of the seven items after reversal.
pub fn respondent_score<F: Scalar>(items: [u8; ITEM_COUNT], reverse: &ReverseItems) -> F {
    let sum: u64 = apply_reversal(items, reverse).iter().map(|&v| u64::from(v)).sum();
    F::of_u64(sum) / F::of_u64(ITEM_COUNT as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar")]
pub struct PsScore<F> {
    pub team_id: String,
    pub period: u32,
    pub mean: F,
    /// Population standard deviation of respondent scores.
    pub stddev: F,
    pub n_respondents: u64,
}

/// Score the responses of one team in one period.
pub fn score_period<F: Scalar>(
    responses: &[SurveyResponse],
    reverse: &ReverseItems,
) -> Result<PsScore<F>, SurveyError> {
    let first = responses.first().ok_or(SurveyError::NoResponses)?;
    let mut scores = Vec::with_capacity(responses.len());
    for r in responses {
        if r.team_id != first.team_id || r.period != first.period {
            return Err(SurveyError::MixedGroup {
                expected_team: first.team_id.clone(),
                expected_period: first.period,
                team: r.team_id.clone(),
                period: r.period,
            });
        }
        r.validate()?;
        scores.push(respondent_score::<F>(r.items, reverse));
    }
    Ok(PsScore {
        team_id: first.team_id.clone(),
        period: first.period,
        mean: mean(&scores).expect("non-empty"),
        stddev: population_stddev(&scores).expect("non-empty"),
        n_respondents: scores.len() as u64,
    })
}

/// Score every (team, period) group, ordered by team then period.
pub fn score_all<F: Scalar>(
    responses: &[SurveyResponse],
    reverse: &ReverseItems,
) -> Result<Vec<PsScore<F>>, SurveyError> {
    let mut groups: BTreeMap<(&str, u32), Vec<SurveyResponse>> = BTreeMap::new();
    for r in responses {
        groups.entry((r.team_id.as_str(), r.period)).or_default().push(r.clone());
    }
    groups.values().map(|g| score_period(g, reverse)).collect()
}

/// Across-period summary for one team.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar")]
pub struct TeamSummary<F> {
    pub team_id: String,
    /// Mean of the period means.
    pub mean: F,
    /// Population standard deviation of the period means.
    pub stddev: F,
    pub periods: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar")]
pub struct TeamSelection<F> {
    pub low_team: String,
    pub high_team: String,
    pub median_of_means: F,
    /// Per-team summaries in team-id order.
    pub summaries: Vec<TeamSummary<F>>,
}

/// Pick the consistently-low team (lowest all-period mean) and the
/// consistently-high team (lowest across-period dispersion among teams at or
/// above the median mean).
///
/// Ties: low prefers larger dispersion, high prefers larger mean, then
/// both fall back to the smaller team id.
pub fn select_extreme_teams<F: Scalar>(scores: &[PsScore<F>]) -> Result<TeamSelection<F>, SurveyError> {
    let mut by_team: BTreeMap<&str, BTreeMap<u32, F>> = BTreeMap::new();
    for s in scores {
        if by_team.entry(s.team_id.as_str()).or_default().insert(s.period, s.mean).is_some() {
            return Err(SurveyError::DuplicateScore { team: s.team_id.clone(), period: s.period });
        }
    }
    if by_team.len() < 2 {
        return Err(SurveyError::TooFewTeams(by_team.len()));
    }
    let periods: BTreeSet<u32> = scores.iter().map(|s| s.period).collect();
    let gaps: Vec<(String, u32)> = by_team
        .iter()
        .flat_map(|(team, ps)| periods.iter().filter(|p| !ps.contains_key(p)).map(|p| (team.to_string(), *p)))
        .collect();
    if !gaps.is_empty() {
        return Err(SurveyError::MissingPeriods(gaps));
    }

    let summaries: Vec<TeamSummary<F>> = by_team
        .iter()
        .map(|(team, ps)| {
            let means: Vec<F> = ps.values().copied().collect();
            TeamSummary {
                team_id: team.to_string(),
                mean: mean(&means).expect("at least one period"),
                stddev: population_stddev(&means).expect("at least one period"),
                periods: means.len() as u64,
            }
        })
        .collect();

    let cmp = |a: F, b: F| a.partial_cmp(&b).unwrap_or(Ordering::Equal);
    let low = summaries
        .iter()
        .min_by(|a, b| cmp(a.mean, b.mean).then(cmp(b.stddev, a.stddev)).then(a.team_id.cmp(&b.team_id)))
        .expect("at least two teams");

    let median = median(summaries.iter().map(|s| s.mean).collect());
    let high = summaries
        .iter()
        .filter(|s| s.mean >= median && s.team_id != low.team_id)
        .min_by(|a, b| cmp(a.stddev, b.stddev).then(cmp(b.mean, a.mean)).then(a.team_id.cmp(&b.team_id)))
        .ok_or(SurveyError::NoHighCandidate)?;

    Ok(TeamSelection {
        low_team: low.team_id.clone(),
        high_team: high.team_id.clone(),
        median_of_means: median,
        summaries: summaries.clone(),
    })
}

fn median<F: Scalar>(mut values: Vec<F>) -> F {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / F::of_u64(2)
    }
}

#[derive(Deserialize)]
struct CsvRow {
    team_id: String,
    period: u32,
    respondent: String,
    q1: u8,
    q2: u8,
    q3: u8,
    q4: u8,
    q5: u8,
    q6: u8,
    q7: u8,
}

/// Read `team_id,period,respondent,q1..q7` rows (header required).
pub fn read_survey_csv(reader: impl Read) -> Result<Vec<SurveyResponse>, SurveyError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| SurveyError::Csv(e.to_string()))?.clone();
    let expected = ["team_id", "period", "respondent", "q1", "q2", "q3", "q4", "q5", "q6", "q7"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(SurveyError::Csv(format!(
            "expected header `{}`, found `{}`",
            expected.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for row in rdr.deserialize::<CsvRow>() {
        let r = row.map_err(|e| SurveyError::Csv(e.to_string()))?;
        out.push(SurveyResponse::new(r.team_id, r.period, r.respondent, [r.q1, r.q2, r.q3, r.q4, r.q5, r.q6, r.q7])?);
    }
    Ok(out)
}

/// `team_id,period,n_respondents,mean,stddev`
pub fn scores_csv<F: Scalar>(scores: &[PsScore<F>]) -> String {
    let mut out = String::from("team_id,period,n_respondents,mean,stddev\n");
    for s in scores {
        let _ = writeln!(
            out,
            "{},{},{},{:.4},{:.4}",
            csv_field(&s.team_id),
            s.period,
            s.n_respondents,
            s.mean.to_f64_lossy(),
            s.stddev.to_f64_lossy()
        );
    }
    out
}

/// Plot-ready `period,team,mean`, ordered by period then team.
pub fn plot_csv<F: Scalar>(scores: &[PsScore<F>]) -> String {
    let mut rows: Vec<&PsScore<F>> = scores.iter().collect();
    rows.sort_by(|a, b| a.period.cmp(&b.period).then(a.team_id.cmp(&b.team_id)));
    let mut out = String::from("period,team,mean\n");
    for s in rows {
        let _ = writeln!(out, "{},{},{:.4}", s.period, csv_field(&s.team_id), s.mean.to_f64_lossy());
    }
    out
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
