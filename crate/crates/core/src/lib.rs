//! Interactive faceted summarization over a topic of news documents.
//!
//! A topic's documents and coreference annotations are clustered into three
//! facets (concepts, entities and statements). Selecting facet-values
//! narrows the topic to the sentences where all of them are mentioned; that
//! sentence-set drives both the refreshed facets and a summary.

pub mod annotations;
pub mod corpus;
pub mod error;
pub mod explore;
pub mod facets;
pub mod index;
pub mod summarize;
mod union_find;

pub use annotations::{load_bundle, AnnotationBundle, BundlePaths, ClusterKind, PairScore, RawCluster};
pub use corpus::{Corpus, Document, Mention, MentionKind, NerTag, Pos, Sentence, SentenceRef, Token};
pub use error::{Error, Result, ValidationError};
pub use explore::{
    intersect, mention_forms, refresh_facets, restricted_view, sentence_set, FacetView, HistoryEntry, MentionForm,
    Selection, SentenceSet, SessionStore,
};
pub use facets::{build_facets, ClusteringConfig, EntityCategory, FacetKind, FacetTables, FacetValue};
pub use index::TopicIndex;
pub use summarize::{
    BackendError, BackendKind, InputOrder, Summarizer, Summary, SummaryBackend, SummarySettings, SummaryStatus,
};
