//! Holds the `acceptance` test target, which checks the workspace end to
//! end against brute-force references. Run it with
//! `cargo test -p anisoreg-validation --test acceptance`.
