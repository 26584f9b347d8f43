use serde::{Deserialize, Serialize};

/// Work counters for a single query.
///
/// Queries take a caller-owned `&mut QueryStats` and only ever add to it, so
/// the caller decides when to reset. The counters stand in for time bounds:
/// a dictionary probe, a binary-search comparison or a scanned cell is each
/// one unit of work.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryStats {
    /// Hash-dictionary lookups and bitvector directory lookups.
    pub dict_probes: u64,
    /// Comparisons made by binary searches.
    pub binsearch_steps: u64,
    /// Cells of the sequence (or of the previous-occurrence array) scanned
    /// sequentially.
    pub cells_scanned: u64,
    /// Range-minimum queries issued.
    pub rmq_queries: u64,
    /// Items emitted by distinct-element listing.
    pub items_listed: u64,
    /// Candidates whose frequency was verified.
    pub candidates: u64,
    /// Verifications cut short because the count could no longer reach the
    /// threshold.
    pub aborted: u64,
}

impl QueryStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reset(&mut self) {
        *self = Self::default();
    }

    /// Dictionary probes plus binary-search steps.
    pub fn probes(&self) -> u64 {
        self.dict_probes + self.binsearch_steps
    }

    pub fn merge(&mut self, other: &QueryStats) {
        self.dict_probes += other.dict_probes;
        self.binsearch_steps += other.binsearch_steps;
        self.cells_scanned += other.cells_scanned;
        self.rmq_queries += other.rmq_queries;
        self.items_listed += other.items_listed;
        self.candidates += other.candidates;
        self.aborted += other.aborted;
    }
}
