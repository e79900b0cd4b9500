//! Bundled example specifications.

use super::{parse_spec, SpecFile};

/// Dining philosophers on rings of two to five seats.
pub const DINING: &str = include_str!("../../fixtures/dining.ugts");

pub fn dining() -> SpecFile {
    parse_spec(DINING).expect("bundled fixture parses")
}

#[cfg(test)]
mod tests {
    #[test]
    fn dining_parses() {
        let spec = super::dining();
        assert_eq!(spec.rules.len(), 6);
        assert_eq!(spec.errors.len(), 2);
        assert_eq!(spec.inits.len(), 4);
    }
}
