//! Offline queries against a built index, for `facetnav query`.

use std::fmt::Write;

use facetnav_core::{
    intersect, restricted_view, FacetKind, FacetView, Selection, Summarizer, Summary, TopicIndex,
};
use serde::Serialize;

use crate::app::SelectedValue;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryOutput {
    pub topic_id: String,
    pub selected: Vec<SelectedValue>,
    pub sentence_count: usize,
    pub truncated: bool,
    pub facets: FacetView,
    pub summary: Option<Summary>,
}

/// Resolves each key (value id or label) and evaluates the selection.
pub fn run_query(index: &TopicIndex, summarizer: &Summarizer, keys: &[String]) -> Result<QueryOutput, CliError> {
    let mut selected = Vec::new();
    for key in keys {
        let v = index.resolve(key)?;
        selected.push(SelectedValue {
            value_id: v.value_id.clone(),
            label: v.label.clone(),
            facet: v.facet,
        });
    }
    let selection = Selection::new(index, selected.iter().map(|v| v.value_id.clone()).collect())?;
    let sentences = intersect(index, &selection)?;
    let summary = (!selection.is_empty()).then(|| summarizer.summarize_set(index, &selection, &sentences));
    Ok(QueryOutput {
        topic_id: index.topic_id().to_string(),
        selected,
        sentence_count: sentences.len(),
        truncated: summary.as_ref().is_some_and(|s| s.truncated),
        facets: restricted_view(index, &selection, &sentences),
        summary,
    })
}

pub fn render_table(out: &QueryOutput) -> String {
    let mut s = String::new();
    let selected: Vec<String> = out
        .selected
        .iter()
        .map(|v| format!("{} [{}]", v.label, v.value_id))
        .collect();
    let _ = writeln!(s, "topic      {}", out.topic_id);
    let _ = writeln!(
        s,
        "selected   {}",
        if selected.is_empty() { "(none)".to_string() } else { selected.join(", ") }
    );
    let _ = writeln!(s, "sentences  {}{}", out.sentence_count, if out.truncated { " (input truncated)" } else { "" });
    for kind in FacetKind::ALL {
        let panel = out.facets.panel(kind);
        let _ = writeln!(s, "\n{} ({} of {})", kind.as_str(), panel.values.len(), panel.total_values);
        let width = panel.values.iter().map(|e| e.label.chars().count()).max().unwrap_or(0);
        for e in &panel.values {
            let mark = if e.selected { '*' } else { ' ' };
            let _ = write!(s, "{mark} {:<4} {:<width$}  {:>4}", e.value_id, e.label, e.frequency);
            if let Some(c) = e.category {
                let _ = write!(s, "  {}", c.as_str());
            }
            s.push('\n');
        }
    }
    match &out.summary {
        None => s.push_str("\nSUMMARY\n  (select a value to summarize)\n"),
        Some(summary) => {
            let backend = serde_json::to_value(summary.backend).unwrap_or_default();
            let _ = writeln!(s, "\nSUMMARY ({})", backend.as_str().unwrap_or("").to_lowercase());
            if summary.sentences.is_empty() {
                s.push_str("  (no sentences)\n");
            }
            for line in &summary.sentences {
                let _ = writeln!(s, "  {line}");
            }
        }
    }
    s
}
