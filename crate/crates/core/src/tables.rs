//! Tables shipped with the crate.

use crate::table::{parse_table_str, MappingTable};

/// Source text of the Wolof table (`tables/wolof.tbl`).
pub const WOLOF: &str = include_str!("../tables/wolof.tbl");

/// The default Wolof table.
pub fn wolof() -> MappingTable {
    parse_table_str(WOLOF).expect("shipped Wolof table parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate::validate_table;

    #[test]
    fn wolof_is_accepted() {
        let report = validate_table(&wolof());
        assert!(report.accepted(), "{:#?}", report.errors);
        assert!(report.decodable_forward);
        assert!(report.decodable_reverse);
    }
}
