use std::collections::HashMap;

use crate::corpus::Mention;
use crate::facets::FacetKind;

/// Display label of a mention cluster.
///
/// Concepts and entities use the most frequent surface (counted
/// case-insensitively, returned with the casing of its first occurrence).
/// Statements use the longest surface in characters. Ties go to the
/// lexicographically smallest lowercased surface.
pub fn cluster_label(mentions: &[Mention], facet: FacetKind) -> String {
    match facet {
        FacetKind::Statements => longest_surface(mentions),
        FacetKind::Concepts | FacetKind::Entities => modal_surface(mentions),
    }
}

fn modal_surface(mentions: &[Mention]) -> String {
    surface_counts(mentions)
        .into_iter()
        .min_by(|a, b| b.count.cmp(&a.count).then_with(|| a.folded.cmp(&b.folded)))
        .map(|f| f.surface)
        .unwrap_or_default()
}

fn longest_surface(mentions: &[Mention]) -> String {
    mentions
        .iter()
        .map(|m| (m.surface.chars().count(), m.surface.to_lowercase(), &m.surface))
        .min_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)))
        .map(|(_, _, s)| s.clone())
        .unwrap_or_default()
}

/// A distinct (case-insensitive) surface form with its count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceCount {
    pub surface: String,
    pub folded: String,
    pub count: usize,
}

/// Distinct surfaces in first-occurrence order.
pub fn surface_counts(mentions: &[Mention]) -> Vec<SurfaceCount> {
    let mut slot: HashMap<String, usize> = HashMap::new();
    let mut out: Vec<SurfaceCount> = Vec::new();
    for m in mentions {
        let folded = m.surface.to_lowercase();
        match slot.get(&folded) {
            Some(&i) => out[i].count += 1,
            None => {
                slot.insert(folded.clone(), out.len());
                out.push(SurfaceCount {
                    surface: m.surface.clone(),
                    folded,
                    count: 1,
                });
            }
        }
    }
    out
}
