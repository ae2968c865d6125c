use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use num_rational::Ratio;
use teamsignal::{
    build_team_report, compute_usage_metrics, default_lexicon, parse_export, rank_emoji_reactions, MetricsOptions,
    ReportConfig, TeamReport,
};
use teamsignal_testkit::{ExportSpec, SyntheticExport};

fn write_channel(root: &Path, records: &[String]) -> PathBuf {
    std::fs::create_dir_all(root.join("general")).unwrap();
    std::fs::write(root.join("channels.json"), r#"[{"id":"C1","name":"general"}]"#).unwrap();
    std::fs::write(root.join("users.json"), r#"[{"id":"U1"},{"id":"U2"}]"#).unwrap();
    std::fs::write(root.join("general/2024-01-01.json"), format!("[{}]", records.join(","))).unwrap();
    root.to_path_buf()
}

/// 10 plain messages and 5 thread roots, each answered once 60 s later.
#[test]
fn twenty_message_threads() {
    let tmp = tempfile::tempdir().unwrap();
    let base = 1_704_067_200u64;
    let mut records = Vec::new();
    for i in 0..10u64 {
        let ts = base + 10_000 + i * 7;
        records.push(format!(r#"{{"ts":"{ts}.000000","user":"U1","text":"plain {i}"}}"#));
    }
    for i in 0..5u64 {
        let root = base + i * 1000;
        records.push(format!(
            r#"{{"ts":"{root}.000000","thread_ts":"{root}.000000","reply_count":1,"user":"U1","text":"q{i}"}}"#
        ));
        records
            .push(format!(r#"{{"ts":"{}.000000","thread_ts":"{root}.000000","user":"U2","text":"a{i}"}}"#, root + 60));
    }
    let c = parse_export(&write_channel(&tmp.path().join("threads"), &records)).unwrap();
    let m = compute_usage_metrics::<f64>(&c, &MetricsOptions::default());
    assert_eq!(m.total_messages, 20);
    assert_eq!(m.replies, 5);
    assert_eq!(m.messages_with_reply.percent_rounded(), Some(25));
    assert_eq!(m.avg_time_to_first_reply, Some(60.0));
}

#[test]
fn emoji_ranking_fixture() {
    let tmp = tempfile::tempdir().unwrap();
    let records = vec![
        r#"{"ts":"1.000000","user":"U1","text":"a","reactions":[{"name":"heart","users":["U1","U2"],"count":2},{"name":"blob_dance","users":["U2"],"count":1}]}"#.to_string(),
        r#"{"ts":"2.000000","user":"U2","text":"b","reactions":[{"name":"heart","users":["U1"],"count":1},{"name":"thumbsup","users":["U1","U2"],"count":2}]}"#.to_string(),
    ];
    let c = parse_export(&write_channel(&tmp.path().join("emoji"), &records)).unwrap();
    let custom: BTreeSet<String> = ["blob_dance".to_string()].into();
    let r = rank_emoji_reactions(&c, 10, Some(&custom));
    let got: Vec<(&str, u64, bool)> =
        r.entries.iter().map(|e| (e.name.as_str(), e.instances.numer(), e.is_custom)).collect();
    assert_eq!(got, vec![("heart", 3, false), ("thumbsup", 2, false), ("blob_dance", 1, true)]);
    let pct: Vec<f64> = r.entries.iter().map(|e| e.instances.value::<f64>().unwrap() * 100.0).collect();
    assert!((pct[1] - 33.333).abs() < 1e-3 && (pct[2] - 16.667).abs() < 1e-3);
    assert_eq!(rank_emoji_reactions(&c, 1, Some(&custom)).entries, r.entries[..1]);
}

fn synthetic(seed: u64) -> teamsignal::Corpus {
    let tmp = tempfile::tempdir().unwrap();
    let export = SyntheticExport::generate(&ExportSpec::new("gen", seed, 3, 150));
    parse_export(&export.write_dir(tmp.path()).unwrap()).unwrap()
}

#[test]
fn contribution_variance_matches_rational_arithmetic() {
    for seed in [1, 7, 42] {
        let c = synthetic(seed);
        let m = compute_usage_metrics::<f64>(&c, &MetricsOptions::default());
        let mut per_author: BTreeMap<&str, i128> = BTreeMap::new();
        for msg in c.analytic_messages() {
            if let Some(a) = msg.author.as_deref() {
                *per_author.entry(a).or_default() += 1;
            }
        }
        let total: i128 = per_author.values().sum();
        let n = per_author.len() as i128;
        let shares: Vec<Ratio<i128>> = per_author.values().map(|&c| Ratio::new(c, total)).collect();
        let mean = shares.iter().sum::<Ratio<i128>>() / n;
        let var = shares.iter().map(|s| (s - mean) * (s - mean)).sum::<Ratio<i128>>() / n;
        let exact = m.contribution_variance.unwrap();
        assert_eq!((exact.numer() as i128, exact.denom() as i128), (*var.numer(), *var.denom()), "seed {seed}");
        let sd = m.contribution_share_stddev.unwrap();
        assert!((sd - (*var.numer() as f64 / *var.denom() as f64).sqrt()).abs() < 1e-12);
    }
}

#[test]
fn f32_and_f64_agree() {
    let c = synthetic(3);
    let opts = MetricsOptions::default();
    let a = compute_usage_metrics::<f32>(&c, &opts);
    let b = compute_usage_metrics::<f64>(&c, &opts);
    assert_eq!(a.total_messages, b.total_messages);
    assert_eq!(a.user_mentions, b.user_mentions);
    let close = |x: Option<f32>, y: Option<f64>| (f64::from(x.unwrap()) - y.unwrap()).abs() <= y.unwrap().abs() * 1e-6;
    assert!(close(a.avg_time_to_first_reply, b.avg_time_to_first_reply));
    assert!(close(a.avg_gap_between_messages, b.avg_gap_between_messages));
    assert!(close(a.contribution_share_stddev, b.contribution_share_stddev));
}

#[test]
fn report_round_trip_and_determinism() {
    let c = synthetic(9);
    let lex = default_lexicon();
    let config = ReportConfig::default();
    let a: TeamReport = build_team_report(&c, &lex, &config).unwrap().with_generated_at("t");
    let b: TeamReport = build_team_report(&c, &lex, &config).unwrap().with_generated_at("t");
    assert_eq!(a.to_json(), b.to_json());
    let back = TeamReport::from_json(&a.to_json()).unwrap();
    assert_eq!(back.to_json(), a.to_json());
    let small: teamsignal::report::TeamReport<f32> = build_team_report(&c, &lex, &config).unwrap();
    assert_eq!(small.usage.total_messages, a.usage.total_messages);
}
