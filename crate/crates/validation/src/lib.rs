//! Holds the `acceptance` test target. Run it alone with
//! `cargo test -p hessbasis-validation --test acceptance`.
