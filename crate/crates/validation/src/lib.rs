//! Holds the `acceptance` test target, which exercises every crate of the
//! workspace. Kept in its own package so that the rest of the workspace's
//! tests run before it.
