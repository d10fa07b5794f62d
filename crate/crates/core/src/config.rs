/// Resource caps for the deciders and fixpoint engines.
///
/// Every cap is configuration, not a constant: violating one yields a
/// distinguishable error instead of a silent truncation or a wrong answer.
#[derive(Debug, Clone)]
pub struct Caps {
    /// Maximum monoid size accepted by the transition-monoid construction.
    pub monoid_cap: usize,
    /// Hard cap on subset-construction states during determinization.
    pub determinize_cap: usize,
    /// Maximum number of descendants enumerated when a downward closure or
    /// an idempotent search below a single element is materialized.
    pub downset_cap: usize,
    /// Maximum number of element additions performed by a fixpoint run.
    pub iteration_cap: usize,
    /// Maximum number of stored maximal pairs across S and the T-components.
    pub stored_cap: usize,
    /// Maximum number of cover expressions emitted by witness synthesis.
    pub expression_cap: usize,
    /// Word-length bound for bounded cover verification.
    pub check_len: usize,
    /// Call budget for the stratified-preorder test oracle.
    pub strata_budget: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            monoid_cap: 4096,
            determinize_cap: 1 << 16,
            downset_cap: 1 << 20,
            iteration_cap: 1_000_000,
            stored_cap: 200_000,
            expression_cap: 10_000,
            check_len: 8,
            strata_budget: 1_000_000,
        }
    }
}
