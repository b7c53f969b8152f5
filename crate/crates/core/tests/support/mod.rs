pub mod big_ledger;
