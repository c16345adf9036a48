//! Relations, rewriting and independence checks for the skein algebra of
//! the four-punctured disk.

pub mod catalog;
pub mod derive;
pub mod rewrite;
pub mod table;
pub mod trace;

pub use catalog::{build_catalog, Relation, RelationCatalog, RelationKind, VerifyReport};
pub use rewrite::{Engine, NormalForm, RewriteError};

/// Whether a multidegree lies in the range where defining relations live:
/// `sum e_v <= 2 (#{v : e_v > 0} + 1)`.
pub fn xi_member(e: &[u32]) -> bool {
    let total: u32 = e.iter().sum();
    let support = e.iter().filter(|&&x| x > 0).count() as u32;
    total <= 2 * (support + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xi_examples() {
        assert!(xi_member(&[1, 1, 1, 1]));
        assert!(xi_member(&[2, 2, 2, 4]));
        assert!(!xi_member(&[3, 3, 3, 3]));
        assert!(xi_member(&[0, 0, 0, 0]));
        assert!(xi_member(&[0, 0, 0, 3]));
        assert!(!xi_member(&[0, 0, 0, 5]));
    }
}
