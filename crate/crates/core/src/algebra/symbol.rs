use std::fmt;

/// An opaque generator of the coefficient ring besides `L`.
///
/// `Mu(k)` stands for the class of the group of `k`-th roots of unity with
/// its natural action. `Named` symbols are free classes supplied by the user
/// (stratum covers, Hodge–Deligne data, ...). No relations hold between
/// symbols other than commutativity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Mu(u64),
    /// Identifier after the leading `W`.
    Named(String),
}

impl Symbol {
    pub fn mu(k: u64) -> Self {
        assert!(k >= 1, "mu(k) requires k >= 1");
        Symbol::Mu(k)
    }

    /// Builds a named symbol from its full spelling, e.g. `"W1"`.
    pub fn named(full: &str) -> Option<Self> {
        let rest = full.strip_prefix('W')?;
        if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return None;
        }
        Some(Symbol::Named(rest.to_string()))
    }

    pub fn is_mu(&self) -> bool {
        matches!(self, Symbol::Mu(_))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Mu(k) => write!(f, "mu({k})"),
            Symbol::Named(name) => write!(f, "W{name}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_requires_prefix_and_identifier() {
        assert_eq!(Symbol::named("W1"), Some(Symbol::Named("1".into())));
        assert_eq!(Symbol::named("Wfoo_2").unwrap().to_string(), "Wfoo_2");
        assert_eq!(Symbol::named("W"), None);
        assert_eq!(Symbol::named("X1"), None);
        assert_eq!(Symbol::named("W-1"), None);
    }

    #[test]
    fn mu_sorts_before_named() {
        assert!(Symbol::Mu(7) < Symbol::Named("0".into()));
        assert!(Symbol::Mu(2) < Symbol::Mu(10));
    }
}
