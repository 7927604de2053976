//! Search verdicts, step budgets and certificate plumbing shared by every
//! search in the workbench.
//!
//! The contract: `Found` always carries a witness whose certificate records
//! what was checked; `NotFound` is only ever produced by an exhaustive scan;
//! anything cut short by a budget or by a capped enumeration is `Undecided`.

use serde::{Deserialize, Serialize};

/// How much of the ambient category a verdict has actually seen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Completeness {
    /// The enumerated data is all the data there is.
    Exhaustive,
    /// The provider is a capped slice of an infinite family; negative
    /// verdicts must not be drawn from it.
    WithinCap,
}

impl Completeness {
    pub fn meet(self, other: Completeness) -> Completeness {
        if self == Completeness::Exhaustive && other == Completeness::Exhaustive {
            Completeness::Exhaustive
        } else {
            Completeness::WithinCap
        }
    }

    pub fn is_exhaustive(self) -> bool {
        self == Completeness::Exhaustive
    }
}

/// Step budget for a search. One step is one elementary check (a cone
/// materialised, a factorization attempted).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_steps: u64,
}

impl Budget {
    pub fn new(max_steps: u64) -> Budget {
        Budget { max_steps }
    }

    /// Map a user-facing cap (CLI `--cap N`, default 4) to a step budget.
    pub fn from_cap(cap: u32) -> Budget {
        Budget {
            max_steps: 4_000_000u64.saturating_mul(u64::from(cap.max(1))),
        }
    }
}

impl Default for Budget {
    fn default() -> Budget {
        Budget::from_cap(4)
    }
}

/// Mutable gas tank threaded through a search.
#[derive(Debug, Clone)]
pub struct Gas {
    left: u64,
    budget: Budget,
}

impl Gas {
    pub fn new(budget: Budget) -> Gas {
        Gas {
            left: budget.max_steps,
            budget,
        }
    }

    /// Spend `n` steps; returns false once the tank is dry.
    pub fn spend(&mut self, n: u64) -> bool {
        if self.left >= n {
            self.left -= n;
            true
        } else {
            self.left = 0;
            false
        }
    }

    pub fn exhausted(&self) -> bool {
        self.left == 0
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }
}

/// Reason a search could not reach a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Undecided {
    pub reason: String,
}

impl Undecided {
    pub fn new(reason: impl Into<String>) -> Undecided {
        Undecided {
            reason: reason.into(),
        }
    }

    pub fn budget() -> Undecided {
        Undecided::new("step budget exhausted")
    }

    pub fn capped(what: &str) -> Undecided {
        Undecided::new(format!("{what}: enumeration capped, refutation unsound"))
    }
}

/// Outcome of a bounded search for a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Search<T> {
    Found(T),
    /// Exhaustive refutation; `checked` counts the candidates ruled out.
    NotFound { checked: u64 },
    Undecided(Undecided),
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_found(&self) -> Option<&T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Search::Found(_))
    }

    pub fn is_not_found(&self) -> bool {
        matches!(self, Search::NotFound { .. })
    }

    pub fn is_undecided(&self) -> bool {
        matches!(self, Search::Undecided(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Search<U> {
        match self {
            Search::Found(t) => Search::Found(f(t)),
            Search::NotFound { checked } => Search::NotFound { checked },
            Search::Undecided(u) => Search::Undecided(u),
        }
    }

    /// Collapse a refutation from a capped enumeration into `Undecided`.
    pub fn respect_cap(self, completeness: Completeness) -> Search<T> {
        match self {
            Search::NotFound { .. } if !completeness.is_exhaustive() => {
                Search::Undecided(Undecided::capped("search"))
            }
            other => other,
        }
    }
}

/// Three-valued verdict used by checks and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Refuted,
    Undecided,
}

impl Verdict {
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Refuted, _) | (_, Refuted) => Refuted,
            (Undecided, _) | (_, Undecided) => Undecided,
            (Holds, Holds) => Holds,
        }
    }

    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Holds
        } else {
            Verdict::Refuted
        }
    }
}

/// Upper bound on entries stored verbatim inside a certificate; larger check
/// lists are summarised by their counts.
pub const CERT_STORE_MAX: usize = 4096;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gas_runs_dry() {
        let mut g = Gas::new(Budget::new(3));
        assert!(g.spend(2));
        assert!(!g.spend(2));
        assert!(g.exhausted());
    }

    #[test]
    fn capped_refutation_degrades_to_undecided() {
        let s: Search<()> = Search::NotFound { checked: 7 };
        assert!(s.clone().respect_cap(Completeness::Exhaustive).is_not_found());
        assert!(s.respect_cap(Completeness::WithinCap).is_undecided());
    }
}
