pub mod oracle;
#[path = "../../../core/tests/support/stub.rs"]
pub mod stub;
pub mod table2;
