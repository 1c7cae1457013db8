use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group order {order} exceeds cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("enumeration of {what} needs {needed} candidates, cap is {cap}")]
    EnumerationCapExceeded { what: String, needed: usize, cap: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroups are not nested as required")]
    NotNested,
    #[error("objects live over different groups: {0}")]
    MixedSignature(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("invalid wreath homomorphism: {0}")]
    InvalidWreathHom(String),
    #[error("actions do not commute: {0}")]
    ActionMismatch(String),
    #[error("divisibility violated: {0}")]
    DivisibilityViolation(String),
    #[error("faithfulness hypothesis fails for {0}")]
    FaithfulnessHypothesisFails(String),
    #[error("finite faithfulness shadow fails: {0}")]
    FaithfulnessShadowFails(String),
    #[error("bad orbit decomposition: {0}")]
    BadDecomposition(String),
    #[error("representatives are not pairwise non-conjugate")]
    NotPairwiseNonConjugate,
    #[error("element does not centralize: {0}")]
    NotCentralizing(String),
    #[error("no irreducible class matches: {0}")]
    UnknownClass(String),
}

impl Error {
    /// True for errors caused by a configured size cap rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::OrderCapExceeded { .. } | Error::EnumerationCapExceeded { .. }
        )
    }
}

/// Size limits for the enumeration-heavy operations.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct Caps {
    /// Largest group whose subgroup lattice is enumerated.
    pub group_order: usize,
    /// Bound on `|A| * |B|` for homomorphism enumeration.
    pub hom_candidates: usize,
    /// Largest group or set that is materialized element by element.
    pub materialize: usize,
    /// Largest ambient dimension for brute-force linear algebra.
    pub brute_force_dim: usize,
    /// Default truncation of splitting catalogs.
    pub q_max: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            group_order: 24,
            hom_candidates: 1_000_000,
            materialize: 1_000_000,
            brute_force_dim: 256,
            q_max: 6,
        }
    }
}

impl Caps {
    pub fn check_order(&self, order: usize) -> Result<()> {
        if order > self.group_order {
            return Err(Error::OrderCapExceeded { order, cap: self.group_order });
        }
        Ok(())
    }

    pub fn check_materialize(&self, what: &str, size: usize) -> Result<()> {
        if size > self.materialize {
            return Err(Error::EnumerationCapExceeded {
                what: what.to_string(),
                needed: size,
                cap: self.materialize,
            });
        }
        Ok(())
    }
}
