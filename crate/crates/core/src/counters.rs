use std::ops::AddAssign;

/// Instrumented work counts collected by every solver.
///
/// `assignments`, `vectors`, `comparisons`, `guesses` and `eq_solves` are the
/// basic operations reported by the bench harness; the remaining fields are
/// diagnostics that break the work down by code path.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WorkCounters {
    /// Full or partial assignments enumerated (restriction branches plus any
    /// exhaustive enumeration).
    pub assignments: u64,
    /// Vectors emitted into split-and-list half lists or subset-sum lists.
    pub vectors: u64,
    /// Coordinate / key comparisons performed by the join searches.
    pub comparisons: u64,
    /// Gate-subset guesses (threshold circuits) or value tuples (symmetric circuits).
    pub guesses: u64,
    /// Linear equation systems handed to the subset-sum solver.
    pub eq_solves: u64,

    /// Branches of the restriction enumeration, i.e. assignments to the assigned set.
    pub branches: u64,
    /// Residual circuits handed to the few-gates / equation machinery.
    pub residual_calls: u64,
    /// Residuals that exceeded the gate budget and were enumerated instead.
    pub fallback_residuals: u64,
    /// Nodes visited by the dominating-pair recursion.
    pub recursion_nodes: u64,
}

impl WorkCounters {
    /// Sum of the basic-operation counters.
    pub fn total_ops(&self) -> u64 {
        self.assignments
            .saturating_add(self.vectors)
            .saturating_add(self.comparisons)
            .saturating_add(self.guesses)
            .saturating_add(self.eq_solves)
    }
}

impl AddAssign for WorkCounters {
    fn add_assign(&mut self, o: Self) {
        self.assignments += o.assignments;
        self.vectors += o.vectors;
        self.comparisons += o.comparisons;
        self.guesses += o.guesses;
        self.eq_solves += o.eq_solves;
        self.branches += o.branches;
        self.residual_calls += o.residual_calls;
        self.fallback_residuals += o.fallback_residuals;
        self.recursion_nodes += o.recursion_nodes;
    }
}
