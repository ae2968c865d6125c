use std::fmt::Write as _;

use super::format::{format_count_percent, format_signed_duration, UNDEFINED};
use super::{ComparisonReport, MetricDelta, MetricRow, ReportFormat, RowValue, TeamReport};
use crate::num::{Fraction, Scalar};
use crate::survey::csv_field;

impl<F: Scalar> TeamReport<F> {
    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Csv => team_csv(self),
            ReportFormat::Markdown => team_markdown(self),
        }
    }
}

impl<F: Scalar> ComparisonReport<F> {
    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Csv => comparison_csv(self),
            ReportFormat::Markdown => comparison_markdown(self),
        }
    }
}

fn md(s: &str) -> String {
    s.replace('|', "\\|")
}

fn fraction_value(f: &Fraction) -> String {
    f.value::<f64>().map(|v| v.to_string()).unwrap_or_default()
}

fn opt_scalar<F: Scalar>(v: Option<F>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// (count, total, value) columns of a row.
fn raw_columns<F: Scalar>(v: &RowValue<F>) -> [String; 3] {
    match v {
        RowValue::Count(c) => [c.to_string(), String::new(), String::new()],
        RowValue::CountPercent(f) | RowValue::Percent(f) => {
            [f.numer().to_string(), f.denom().to_string(), fraction_value(f)]
        }
        RowValue::Duration(d) | RowValue::Value(d) => [String::new(), String::new(), opt_scalar(*d)],
    }
}

fn team_csv<F: Scalar>(r: &TeamReport<F>) -> String {
    let mut out = String::from("section,key,label,count,total,value,rendered\n");
    let mut line = |section: &str, key: &str, label: &str, cols: [String; 3], rendered: &str| {
        let _ = writeln!(
            out,
            "{section},{},{},{},{},{},{}",
            csv_field(key),
            csv_field(label),
            cols[0],
            cols[1],
            cols[2],
            csv_field(rendered)
        );
    };
    let none = || [String::new(), String::new(), String::new()];
    line("meta", "team_id", "Team", none(), &r.team_id);
    line("meta", "tool_version", "Tool version", none(), &r.tool_version);
    line("meta", "lexicon_hash", "Lexicon hash", none(), &r.lexicon_hash);
    line("meta", "n_emoji", "Emoji limit", none(), &r.n_emoji.to_string());
    line("meta", "generated_at", "Generated at", none(), &r.generated_at);
    for row in r.usage_rows() {
        line("usage", &row.key, &row.label, raw_columns(&row.value), &row.value.rendered());
    }
    for row in r.keyword_rows() {
        line("keywords", &row.key, &row.label, raw_columns(&row.value), &row.value.rendered());
    }
    for e in &r.emoji.entries {
        let kind = if e.is_custom { "custom" } else { "standard" };
        let cols = [e.instances.numer().to_string(), e.instances.denom().to_string(), fraction_value(&e.instances)];
        line("emoji", &e.name, kind, cols, &format_count_percent(&e.instances));
    }
    out
}

fn team_markdown<F: Scalar>(r: &TeamReport<F>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Team report: {}\n", md(&r.team_id));
    let _ = writeln!(out, "- Tool: {}", r.tool_version);
    let _ = writeln!(out, "- Lexicon: `{}`", r.lexicon_hash);
    let _ = writeln!(out, "- Generated: {}\n", r.generated_at);

    out.push_str("## Usage\n\n| Behaviour | Value |\n|---|---:|\n");
    for row in r.usage_rows() {
        let _ = writeln!(out, "| {} | {} |", md(&row.label), row.value.rendered());
    }

    let _ = writeln!(
        out,
        "\n## Keywords ({} messages)\n\n| Category | Sub-category | Messages |\n|---|---|---:|",
        r.keywords.total_messages
    );
    for k in &r.keywords.rows {
        let _ = writeln!(out, "| {} | {} | {} |", k.category, md(&k.sub_category), format_count_percent(&k.messages));
    }

    let _ = writeln!(
        out,
        "\n## Top {} emoji reactions ({} reactions)\n\n| Rank | Emoji | Reactions | Custom |\n|---:|---|---:|---|",
        r.n_emoji, r.emoji.total_reaction_instances
    );
    for (i, e) in r.emoji.entries.iter().enumerate() {
        let _ = writeln!(
            out,
            "| {} | :{}: | {} | {} |",
            i + 1,
            md(&e.name),
            format_count_percent(&e.instances),
            if e.is_custom { "yes" } else { "no" }
        );
    }
    out
}

fn delta_rendered<F: Scalar>(kind: &RowValue<F>, d: &MetricDelta<F>) -> String {
    let pp = |p: F| format!("{:+.2} pp", p.to_f64_lossy());
    let rendered = match kind {
        RowValue::Count(_) => d.count.map(|c| format!("{c:+}")),
        RowValue::CountPercent(_) => d.count.map(|c| match d.percentage_points {
            Some(p) => format!("{c:+} ({})", pp(p)),
            None => format!("{c:+}"),
        }),
        RowValue::Percent(_) => d.percentage_points.map(pp),
        RowValue::Duration(_) => d.value.map(format_signed_duration),
        RowValue::Value(_) => d.value.map(|v| format!("{:+.3}", v.to_f64_lossy())),
    };
    rendered.unwrap_or_else(|| UNDEFINED.to_string())
}

struct ComparedRow<'a, F> {
    high: MetricRow<F>,
    low: MetricRow<F>,
    delta: &'a MetricDelta<F>,
}

fn compared_rows<F: Scalar>(c: &ComparisonReport<F>) -> Vec<ComparedRow<'_, F>> {
    let rows = |r: &TeamReport<F>| [r.usage_rows(), r.keyword_rows()].concat();
    rows(&c.high)
        .into_iter()
        .zip(rows(&c.low))
        .zip(&c.deltas)
        .map(|((high, low), delta)| ComparedRow { high, low, delta })
        .collect()
}

fn comparison_csv<F: Scalar>(c: &ComparisonReport<F>) -> String {
    let mut out =
        String::from("key,label,high,low,high_rendered,low_rendered,count_delta,percentage_points,value_delta,ratio\n");
    let value = |v: &RowValue<F>| {
        let [count, _, value] = raw_columns(v);
        match v {
            RowValue::Count(_) | RowValue::CountPercent(_) => count,
            _ => value,
        }
    };
    for row in compared_rows(c) {
        let d = row.delta;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            csv_field(&d.key),
            csv_field(&d.label),
            value(&row.high.value),
            value(&row.low.value),
            csv_field(&row.high.value.rendered()),
            csv_field(&row.low.value.rendered()),
            d.count.map(|c| c.to_string()).unwrap_or_default(),
            opt_scalar(d.percentage_points),
            opt_scalar(d.value),
            opt_scalar(d.ratio),
        );
    }
    out
}

fn comparison_markdown<F: Scalar>(c: &ComparisonReport<F>) -> String {
    let (h, l) = (md(&c.high.team_id), md(&c.low.team_id));
    let mut out = String::new();
    let _ = writeln!(out, "# Team comparison: high `{h}` vs low `{l}`\n");
    let _ = writeln!(out, "- Tool: {}", c.high.tool_version);
    let _ = writeln!(out, "- Lexicon: `{}`", c.high.lexicon_hash);
    let _ = writeln!(out, "- Generated: {} / {}\n", c.high.generated_at, c.low.generated_at);

    if let Some(sel) = &c.selection {
        out.push_str("## Team selection\n\n");
        let _ = writeln!(
            out,
            "Low team `{}` has the lowest mean score across periods. High team `{}` has the smallest \
             across-period standard deviation among teams at or above the median mean ({:.4}).\n",
            md(&sel.low_team),
            md(&sel.high_team),
            sel.median_of_means.to_f64_lossy()
        );
        out.push_str("| Team | Mean | Std. dev. | Periods | Role |\n|---|---:|---:|---:|---|\n");
        for s in &sel.summaries {
            let role = if s.team_id == sel.low_team {
                "low"
            } else if s.team_id == sel.high_team {
                "high"
            } else {
                ""
            };
            let _ = writeln!(
                out,
                "| {} | {:.4} | {:.4} | {} | {} |",
                md(&s.team_id),
                s.mean.to_f64_lossy(),
                s.stddev.to_f64_lossy(),
                s.periods,
                role
            );
        }
        out.push('\n');
    }

    let rows = compared_rows(c);
    let n_usage = c.high.usage_rows().len();
    let header = format!("| Behaviour | High value ({h}) | Low value ({l}) | Difference |\n|---|---:|---:|---:|\n");
    for (title, slice) in [("Usage", &rows[..n_usage]), ("Keywords", &rows[n_usage..])] {
        let _ = write!(out, "## {title}\n\n{header}");
        for row in slice {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} |",
                md(&row.high.label),
                row.high.value.rendered(),
                row.low.value.rendered(),
                delta_rendered(&row.high.value, row.delta)
            );
        }
        out.push('\n');
    }

    let _ = writeln!(
        out,
        "## Top {} emoji reactions\n\n| Rank | High ({h}, {} reactions) | Low ({l}, {} reactions) |\n|---:|---|---|",
        c.high.n_emoji, c.high.emoji.total_reaction_instances, c.low.emoji.total_reaction_instances
    );
    let cell = |e: Option<&crate::metrics::EmojiCount>| match e {
        Some(e) => format!(
            ":{}: {}{}",
            md(&e.name),
            format_count_percent(&e.instances),
            if e.is_custom { " (custom)" } else { "" }
        ),
        None => String::new(),
    };
    let depth = c.high.emoji.entries.len().max(c.low.emoji.entries.len());
    for i in 0..depth {
        let _ = writeln!(
            out,
            "| {} | {} | {} |",
            i + 1,
            cell(c.high.emoji.entries.get(i)),
            cell(c.low.emoji.entries.get(i))
        );
    }
    out
}
